"""
Utility modules.
"""

from .seeding import derive_rng, stream_seed
from .config_loader import ConfigLoader, config_loader, parse_assignment
from .results_writer import ResultsWriter, read_rounds, write_json

__all__ = [
    'derive_rng',
    'stream_seed',
    'ConfigLoader',
    'config_loader',
    'parse_assignment',
    'ResultsWriter',
    'read_rounds',
    'write_json',
]
