"""
Seeded mini-batch iteration over a client's dataset view.
"""

from typing import Iterator, Union

import numpy as np

from core.errors import InsufficientDataError
from models.dataset import DatasetView, LabeledBatch

EpochSeed = Union[int, np.random.SeedSequence, np.random.Generator]


def n_full_batches(n_samples: int, batch_size: int) -> int:
    return n_samples // batch_size


def batch_iterator(view: DatasetView, batch_size: int, epoch_seed: EpochSeed) -> Iterator[LabeledBatch]:
    """
    Shuffle the view with ``epoch_seed`` and yield full batches only; the
    remainder of fewer than ``batch_size`` samples is dropped.
    """
    if batch_size < 2:
        raise ValueError(f"batch_size must be >= 2, got {batch_size}")
    if len(view) < batch_size:
        raise InsufficientDataError(f"{len(view)} samples cannot fill one batch of {batch_size}")

    rng = epoch_seed if isinstance(epoch_seed, np.random.Generator) else np.random.default_rng(epoch_seed)
    order = view.indices[rng.permutation(len(view))]
    inputs, labels = view.dataset.inputs, view.dataset.labels
    for b in range(n_full_batches(len(view), batch_size)):
        indices = order[b * batch_size:(b + 1) * batch_size]
        yield LabeledBatch(inputs[indices], labels[indices], indices)
