"""
Base classes for CLI commands.
"""

from .base_command import BaseCommand
from .cli_helpers import CLIHelpers

__all__ = [
    'BaseCommand',
    'CLIHelpers',
]
