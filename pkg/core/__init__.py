"""
Shared errors and enums.
"""

from .errors import (
    FedContrastError,
    DimensionError,
    DegenerateInputError,
    EmptyReductionError,
    LabelRangeError,
    NoPositivesError,
    NoUsableAnchorsError,
    InsufficientClassesError,
    PartitionError,
    DataFormatError,
    DataGenerationError,
    InsufficientDataError,
    CheckpointError,
    ConfigError,
    DivergenceError,
)
from .modes import TrainingMode, AggregationRule

__all__ = [
    'FedContrastError',
    'DimensionError',
    'DegenerateInputError',
    'EmptyReductionError',
    'LabelRangeError',
    'NoPositivesError',
    'NoUsableAnchorsError',
    'InsufficientClassesError',
    'PartitionError',
    'DataFormatError',
    'DataGenerationError',
    'InsufficientDataError',
    'CheckpointError',
    'ConfigError',
    'DivergenceError',
    'TrainingMode',
    'AggregationRule',
]
