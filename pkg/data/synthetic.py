"""
Gaussian-blob classification data for desk-scale runs.
"""

from typing import Tuple

import numpy as np

from core.errors import DataGenerationError
from models.dataset import Dataset
from utils.seeding import derive_rng

MEAN_REJECTION_BUDGET = 10_000


def _class_means(n_classes: int, dim: int, min_distance: float, rng: np.random.Generator) -> np.ndarray:
    means = []
    rejected = 0
    while len(means) < n_classes:
        candidate = rng.uniform(-1.0, 1.0, size=dim)
        if all(np.linalg.norm(candidate - m) >= min_distance for m in means):
            means.append(candidate)
            continue
        rejected += 1
        if rejected > MEAN_REJECTION_BUDGET:
            raise DataGenerationError(
                f"Could not place {n_classes} class means in [-1, 1]^{dim} at pairwise distance "
                f">= {min_distance:g} ({len(means)} placed)"
            )
    return np.stack(means)


def synthetic_blobs(
    n_classes: int,
    dim: int,
    n_per_class: int,
    spread: float,
    seed: int,
    test_fraction: float = 0.2,
) -> Tuple[Dataset, Dataset]:
    """
    Class means uniform in [-1, 1]^dim, at least 2·spread apart; samples are
    mean + N(0, spread²·I). Each class is split train/test separately, so both
    splits stay class-balanced.

    Returns:
        (train, test) datasets
    """
    if n_classes < 2 or dim < 2:
        raise ValueError("synthetic_blobs needs n_classes >= 2 and dim >= 2")
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    if not spread > 0:
        raise ValueError(f"spread must be positive, got {spread}")

    means = _class_means(n_classes, dim, 2.0 * spread, derive_rng(seed, "data", "means"))
    noise_rng = derive_rng(seed, "data", "samples")
    split_rng = derive_rng(seed, "data", "split")
    n_test = int(round(n_per_class * test_fraction))

    train_x, train_y, test_x, test_y = [], [], [], []
    for cls in range(n_classes):
        samples = means[cls] + spread * noise_rng.standard_normal((n_per_class, dim))
        order = split_rng.permutation(n_per_class)
        test_idx, train_idx = np.sort(order[:n_test]), np.sort(order[n_test:])
        train_x.append(samples[train_idx])
        train_y.append(np.full(train_idx.size, cls))
        test_x.append(samples[test_idx])
        test_y.append(np.full(test_idx.size, cls))

    train = Dataset(np.concatenate(train_x), np.concatenate(train_y), n_classes, 'train')
    test = Dataset(np.concatenate(test_x), np.concatenate(test_y), n_classes, 'test')
    return train, test
