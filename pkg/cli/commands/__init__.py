"""
Command modules for CLI operations.
"""

from .partition_command import PartitionCommand
from .train_command import TrainCommand
from .asymptotics_command import AsymptoticsCommand
from .report_command import ReportCommand

__all__ = [
    'PartitionCommand',
    'TrainCommand',
    'AsymptoticsCommand',
    'ReportCommand',
]
