"""
Command-line interface for the simulator.
"""

from .experiment_cli import ExperimentCLI, main

__all__ = [
    'ExperimentCLI',
    'main',
]
