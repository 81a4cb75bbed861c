"""
Alignment and uniformity of embeddings on the unit hypersphere.

    alignment   E ‖u − v‖^a            over positive (same-class) pairs
    uniformity  log E exp(−t‖u − v‖²)  over distinct pairs
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import EmptyReductionError
from utils.seeding import derive_rng

PairsLike = Union[np.ndarray, Sequence[Tuple[np.ndarray, np.ndarray]]]


def _as_pairs(pairs: PairsLike) -> Tuple[np.ndarray, np.ndarray]:
    array = np.asarray(pairs, dtype=np.float64)
    if array.size == 0:
        raise EmptyReductionError("alignment_metric needs at least one pair")
    if array.ndim != 3 or array.shape[1] != 2:
        raise ValueError(f"pairs must have shape (P, 2, d), got {array.shape}")
    return array[:, 0, :], array[:, 1, :]


def alignment_metric(pairs: PairsLike, a_exp: float = 2.0) -> float:
    """Mean of ‖u − v‖₂^a_exp over the given pairs."""
    if not a_exp > 0:
        raise ValueError(f"a_exp must be positive, got {a_exp}")
    u, v = _as_pairs(pairs)
    squared = np.sum((u - v) ** 2, axis=1)
    return float(np.mean(squared ** (a_exp / 2.0)))


def uniformity_metric(embeddings: np.ndarray, t: float = 2.0) -> float:
    """log of the mean Gaussian potential exp(−t‖u − v‖²) over unordered distinct pairs."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    points = np.asarray(embeddings, dtype=np.float64)
    if points.ndim != 2 or points.shape[0] < 2:
        raise EmptyReductionError("uniformity_metric needs at least two embeddings")

    exponents = np.concatenate([
        -t * np.sum((points[i + 1:] - points[i]) ** 2, axis=1) for i in range(points.shape[0] - 1)
    ])
    peak = exponents.max()
    return float(peak + np.log(np.sum(np.exp(exponents - peak))) - np.log(exponents.size))


def positive_pairs(embeddings: np.ndarray, labels: np.ndarray, max_pairs: Optional[int] = None,
                   rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """All same-class unordered pairs as a (P, 2, d) array, subsampled to ``max_pairs``."""
    labels = np.asarray(labels)
    rows, cols = np.triu_indices(labels.size, k=1)
    same = labels[rows] == labels[cols]
    rows, cols = rows[same], cols[same]
    if max_pairs is not None and rows.size > max_pairs:
        rng = rng if rng is not None else np.random.default_rng(0)
        keep = np.sort(rng.choice(rows.size, size=max_pairs, replace=False))
        rows, cols = rows[keep], cols[keep]
    return np.stack([embeddings[rows], embeddings[cols]], axis=1)


def representation_metrics(embeddings: np.ndarray, labels: np.ndarray, a_exp: float = 2.0, t: float = 2.0,
                           max_pairs: Optional[int] = None,
                           rng: Optional[np.random.Generator] = None) -> Tuple[float, float]:
    """(alignment, uniformity) of one embedding sample; alignment is NaN without positive pairs."""
    pairs = positive_pairs(embeddings, labels, max_pairs, rng)
    align = alignment_metric(pairs, a_exp) if pairs.shape[0] else float('nan')
    return align, uniformity_metric(embeddings, t)


def metric_sample_indices(n: int, size: int, seed: int) -> np.ndarray:
    """Sorted test indices the representation metrics are computed on; all of them when n ≤ size."""
    if n <= size:
        return np.arange(n)
    rng = derive_rng(seed, "metrics", "sample")
    return np.sort(rng.choice(n, size=size, replace=False))
