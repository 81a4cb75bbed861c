"""
Dataset containers.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import LabelRangeError


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Labeled samples (x_i, y_i): an n×d float matrix and n class indices.
    Immutable after construction.
    """

    inputs: np.ndarray
    labels: np.ndarray
    n_classes: int
    split: str = 'train'

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if inputs.ndim != 2:
            raise ValueError(f"inputs must be an n×d matrix, got shape {inputs.shape}")
        if inputs.shape[0] != labels.size:
            raise ValueError(f"{inputs.shape[0]} inputs but {labels.size} labels")
        if labels.size < 1:
            raise ValueError("A dataset needs at least one sample")
        if labels.min() < 0 or labels.max() >= self.n_classes:
            raise LabelRangeError(f"labels must lie in [0, {self.n_classes})")
        if not np.all(np.isfinite(inputs)):
            raise ValueError("inputs contain non-finite values")
        object.__setattr__(self, 'inputs', _readonly(inputs))
        object.__setattr__(self, 'labels', _readonly(labels))
        object.__setattr__(self, 'n_classes', int(self.n_classes))

    @property
    def n_samples(self) -> int:
        return int(self.labels.size)

    @property
    def input_dim(self) -> int:
        return int(self.inputs.shape[1])

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def view(self, indices: Optional[np.ndarray] = None) -> 'DatasetView':
        if indices is None:
            indices = np.arange(self.n_samples)
        return DatasetView(self, indices)

    def subset(self, indices: np.ndarray, split: Optional[str] = None) -> 'Dataset':
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.inputs[indices], self.labels[indices], self.n_classes, split or self.split)


@dataclass(frozen=True, eq=False)
class DatasetView:
    """A client's slice of a shared dataset, addressed by sample indices."""

    dataset: Dataset
    indices: np.ndarray

    def __post_init__(self):
        indices = np.array(self.indices, dtype=np.int64).reshape(-1)
        if indices.size and (indices.min() < 0 or indices.max() >= self.dataset.n_samples):
            raise IndexError("view indices fall outside the dataset")
        object.__setattr__(self, 'indices', _readonly(indices))

    def __len__(self) -> int:
        return int(self.indices.size)

    @property
    def inputs(self) -> np.ndarray:
        return self.dataset.inputs[self.indices]

    @property
    def labels(self) -> np.ndarray:
        return self.dataset.labels[self.indices]

    @property
    def n_classes(self) -> int:
        return self.dataset.n_classes

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)


@dataclass(frozen=True, eq=False)
class LabeledBatch:
    """One mini-batch: inputs, labels and the dataset indices they came from."""

    inputs: np.ndarray
    labels: np.ndarray
    indices: np.ndarray

    def __len__(self) -> int:
        return int(self.labels.size)
