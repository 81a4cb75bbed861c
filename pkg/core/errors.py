"""
Exception hierarchy for fedcontrast.
Every error raised on purpose by the library derives from FedContrastError.
"""

from typing import Optional


class FedContrastError(Exception):
    """Base class for all library errors."""


class DimensionError(FedContrastError, ValueError):
    """Operand shapes or parameter manifests do not agree."""


class DegenerateInputError(FedContrastError, ValueError):
    """A vector norm fell below the normalization guard."""


class EmptyReductionError(FedContrastError, ValueError):
    """A reduction was asked to run over an empty input."""


class LabelRangeError(FedContrastError, IndexError):
    """A class label lies outside [0, C)."""


class NoPositivesError(FedContrastError, ValueError):
    """No anchor in the batch has a same-class partner."""


class NoUsableAnchorsError(FedContrastError, ValueError):
    """Every anchor was skipped by the decoupled loss."""


class InsufficientClassesError(FedContrastError, ValueError):
    """Prototype-wise loss needs at least two classes."""


class PartitionError(FedContrastError):
    """The requested client partition cannot be produced."""


class DataFormatError(FedContrastError):
    """Malformed dataset file."""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class DataGenerationError(FedContrastError):
    """Synthetic data generation exhausted its retry budget."""


class CheckpointError(FedContrastError):
    """Checkpoint file is unreadable or incompatible with the configured model."""


class ConfigError(FedContrastError, ValueError):
    """Invalid experiment configuration."""


class DivergenceError(FedContrastError):
    """Local training produced a non-finite or exploding loss."""

    def __init__(self, round_index: int, client_id: int, value: float):
        super().__init__(
            f"Training diverged in round {round_index} on client {client_id}: loss={value!r}"
        )
        self.round_index = round_index
        self.client_id = client_id
        self.value = value


class InsufficientDataError(FedContrastError, ValueError):
    """Too few samples to form a single full batch."""
