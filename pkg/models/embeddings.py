"""
Embedding batches, class prototypes and loss breakdowns.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import DimensionError, LabelRangeError
from numerics.tensor import Tensor, as_tensor

# Unit-norm tolerance for embeddings and prototypes
UNIT_NORM_TOL = 1e-9


def _check_unit_rows(values: np.ndarray, what: str) -> None:
    norms = np.linalg.norm(values, axis=1)
    worst = float(np.max(np.abs(norms - 1.0))) if norms.size else 0.0
    if worst > UNIT_NORM_TOL:
        raise ValueError(f"{what} must be unit-norm (max deviation {worst:.3e})")


@dataclass(frozen=True, eq=False)
class EmbeddingBatch:
    """B unit-norm embeddings z_i with their class labels y_i."""

    embeddings: Tensor
    labels: np.ndarray
    n_classes: Optional[int] = None

    def __post_init__(self):
        embeddings = as_tensor(self.embeddings)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if embeddings.ndim != 2:
            raise DimensionError(f"embeddings must be B×d, got {embeddings.shape}")
        if embeddings.shape[0] != labels.size:
            raise DimensionError(f"{embeddings.shape[0]} embeddings but {labels.size} labels")
        if labels.size < 1:
            raise ValueError("An embedding batch needs at least one sample")
        if labels.min() < 0 or (self.n_classes is not None and labels.max() >= self.n_classes):
            raise LabelRangeError("embedding labels out of range")
        _check_unit_rows(embeddings.values, "embeddings")
        labels.setflags(write=False)
        object.__setattr__(self, 'embeddings', embeddings)
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def from_array(cls, values: np.ndarray, labels, n_classes: Optional[int] = None) -> 'EmbeddingBatch':
        return cls(Tensor(values), labels, n_classes)

    @property
    def size(self) -> int:
        return int(self.labels.size)

    @property
    def dim(self) -> int:
        return int(self.embeddings.shape[1])

    def positive_mask(self) -> np.ndarray:
        """mask[i, j] is True when j ≠ i and y_j = y_i (the positive set P_i)."""
        same = self.labels[:, None] == self.labels[None, :]
        np.fill_diagonal(same, False)
        return same

    def negative_mask(self) -> np.ndarray:
        """mask[i, k] is True when y_k ≠ y_i (the negative set N_i)."""
        return self.labels[:, None] != self.labels[None, :]

    def others_mask(self) -> np.ndarray:
        """mask[i, k] is True when k ≠ i."""
        return ~np.eye(self.size, dtype=bool)

    def permuted(self, order: np.ndarray) -> 'EmbeddingBatch':
        order = np.asarray(order, dtype=np.int64)
        return EmbeddingBatch(Tensor(self.embeddings.values[order]), self.labels[order], self.n_classes)


@dataclass(frozen=True, eq=False)
class PrototypeSet:
    """
    One unit-norm vector c_γ per class with the number of samples behind it.
    stale[γ] marks prototypes carried over because no client saw class γ.
    """

    prototypes: np.ndarray
    counts: np.ndarray
    stale: np.ndarray

    def __post_init__(self):
        prototypes = np.array(self.prototypes, dtype=np.float64)
        counts = np.array(self.counts, dtype=np.int64).reshape(-1)
        stale = np.array(self.stale, dtype=bool).reshape(-1)
        if prototypes.ndim != 2 or prototypes.shape[0] != counts.size or stale.size != counts.size:
            raise DimensionError("prototypes, counts and stale flags disagree on the class count")
        if np.any(counts < 0):
            raise ValueError("prototype counts must be non-negative")
        if np.any((counts == 0) & ~stale):
            raise ValueError("a prototype without support samples must be flagged stale")
        _check_unit_rows(prototypes, "prototypes")
        for array in (prototypes, counts, stale):
            array.setflags(write=False)
        object.__setattr__(self, 'prototypes', prototypes)
        object.__setattr__(self, 'counts', counts)
        object.__setattr__(self, 'stale', stale)

    @classmethod
    def initial(cls, n_classes: int, dim: int, rng: np.random.Generator) -> 'PrototypeSet':
        """Pseudo-random unit vectors, all flagged stale."""
        raw = rng.standard_normal((n_classes, dim))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        return cls(raw, np.zeros(n_classes, dtype=np.int64), np.ones(n_classes, dtype=bool))

    @property
    def n_classes(self) -> int:
        return int(self.counts.size)

    @property
    def dim(self) -> int:
        return int(self.prototypes.shape[1])


@dataclass(frozen=True)
class LossBreakdown:
    """
    Decoupled loss with its two raw terms, averaged over the anchors used:

        total = −λ_a · alignment_term + λ_u · uniformity_term

    alignment_term is the mean of Σ_{p∈P_i} sim(z_i, p)/τ ("direct alignment"),
    uniformity_term the mean of |P_i|·log Σ_{n∈N_i} exp(sim(z_i, n)/τ) ("local uniformity").
    """

    total: Tensor
    alignment_term: float
    uniformity_term: float
    anchors_used: int

    @property
    def value(self) -> float:
        return self.total.item()
