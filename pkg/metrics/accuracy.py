"""
Test accuracy with MAX and EMA tracking.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from core.errors import EmptyReductionError
from models.dataset import Dataset, DatasetView
from numerics.model import MLPModel
from numerics.parameters import ParameterVector

DEFAULT_EMA_BETA = 0.9


def accuracy_from_logits(logits: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of rows whose argmax equals the label; ties go to the lowest class index."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise EmptyReductionError("accuracy of an empty test set")
    predictions = np.argmax(logits, axis=1)
    return float(np.count_nonzero(predictions == labels)) / labels.size


def accuracy(params: ParameterVector, testset: Union[Dataset, DatasetView], model: MLPModel) -> float:
    if len(testset.labels) == 0:
        raise EmptyReductionError("accuracy of an empty test set")
    return accuracy_from_logits(model.predict_logits(params, testset.inputs), testset.labels)


def ema_update(prev: Optional[float], acc: float, beta: float = DEFAULT_EMA_BETA) -> float:
    """β·prev + (1−β)·acc; the first value initializes the average."""
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    if prev is None:
        return float(acc)
    return beta * prev + (1.0 - beta) * acc


@dataclass
class AccuracyTracker:
    """Running MAX and EMA of per-round test accuracy."""

    beta: float = DEFAULT_EMA_BETA
    history: List[float] = field(default_factory=list)
    ema: Optional[float] = None
    max_acc: Optional[float] = None

    def update(self, acc: float) -> float:
        self.history.append(float(acc))
        self.ema = ema_update(self.ema, acc, self.beta)
        self.max_acc = acc if self.max_acc is None else max(self.max_acc, acc)
        return self.ema

    @property
    def final_acc(self) -> Optional[float]:
        return self.history[-1] if self.history else None

    def summary(self) -> dict:
        return {
            'max_acc': self.max_acc,
            'final_ema_acc': self.ema,
            'final_acc': self.final_acc,
        }
