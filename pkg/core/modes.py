"""
Training mode and aggregation rule enums.
"""

from enum import Enum


class TrainingMode(str, Enum):
    """Local objective used by every client."""

    FEDAVG_PLAIN = 'fedavg_plain'
    """Cross-entropy only."""

    SUPCON_BASELINE = 'supcon_baseline'
    """Cross-entropy plus supervised contrastive regularizer."""

    SAMPLE_WISE = 'sample_wise'
    """Cross-entropy plus decoupled loss over batch samples."""

    PROTOTYPE_WISE = 'prototype_wise'
    """Cross-entropy plus decoupled loss over global class prototypes."""

    @property
    def uses_decoupled_loss(self) -> bool:
        return self in (TrainingMode.SAMPLE_WISE, TrainingMode.PROTOTYPE_WISE)


class AggregationRule(str, Enum):
    """Server-side parameter averaging rule."""

    UNIFORM = 'uniform'
    WEIGHTED = 'weighted'
