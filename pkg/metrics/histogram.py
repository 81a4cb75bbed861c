"""
Intra- and inter-class cosine-similarity histograms.
"""

from typing import Tuple

import numpy as np

from models.embeddings import EmbeddingBatch
from models.records import SimilarityHistogram
from utils.seeding import derive_rng

N_BINS = 40
DEFAULT_MAX_PAIRS = 100_000


def histogram_edges() -> np.ndarray:
    return np.linspace(-1.0, 1.0, N_BINS + 1)


def _bin(values: np.ndarray, edges: np.ndarray) -> Tuple[np.ndarray, float]:
    counts, _ = np.histogram(values, bins=edges)
    mean = float(values.mean()) if values.size else float('nan')
    return counts.astype(np.int64), mean


def _pair_counts(labels: np.ndarray) -> Tuple[int, int]:
    sizes = np.bincount(labels).astype(np.int64)
    n = int(labels.size)
    intra = int(np.sum(sizes * (sizes - 1) // 2))
    return intra, n * (n - 1) // 2 - intra


def _all_pairs(labels: np.ndarray, same_class: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Every pair of the category, built class by class."""
    rows, cols = [], []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        if same_class:
            i, j = np.triu_indices(members.size, k=1)
            rows.append(members[i])
            cols.append(members[j])
        else:
            others = np.flatnonzero(labels > label)
            rows.append(np.repeat(members, others.size))
            cols.append(np.tile(others, members.size))
    if not rows:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(rows), np.concatenate(cols)


def _sampled_pairs(labels: np.ndarray, same_class: bool, total: int, max_pairs: int,
                   rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``max_pairs`` distinct pairs of the category, uniformly at random: the first
    distinct hits of a seeded stream of uniform unordered pairs.
    """
    n = labels.size
    all_pairs = n * (n - 1) // 2
    keys = np.zeros(0, dtype=np.int64)
    while keys.size < max_pairs:
        need = max_pairs - keys.size
        draws = min(int(need * all_pairs / total * 1.5) + 64, 4_000_000)
        a = rng.integers(0, n, size=draws)
        b = rng.integers(0, n, size=draws)
        i, j = np.minimum(a, b), np.maximum(a, b)
        hit = (i != j) & ((labels[i] == labels[j]) == same_class)
        keys = np.concatenate([keys, i[hit] * n + j[hit]])
        _, first = np.unique(keys, return_index=True)
        keys = keys[np.sort(first)]
    keys = keys[:max_pairs]
    return keys // n, keys % n


def _category_values(z: np.ndarray, labels: np.ndarray, same_class: bool, total: int, max_pairs: int,
                     rng: np.random.Generator) -> np.ndarray:
    if total <= max_pairs:
        rows, cols = _all_pairs(labels, same_class)
    else:
        rows, cols = _sampled_pairs(labels, same_class, total, max_pairs, rng)
    return np.clip(np.einsum('ij,ij->i', z[rows], z[cols]), -1.0, 1.0)


def cosine_histogram(embeddings: EmbeddingBatch, max_pairs: int = DEFAULT_MAX_PAIRS,
                     seed: int = 0) -> SimilarityHistogram:
    """
    Bin the cosine similarities of same-class and different-class pairs into
    40 uniform bins on [−1, 1]. A category with at most ``max_pairs`` pairs is
    histogrammed in full, a larger one through a seeded sample of ``max_pairs``
    distinct pairs. A category without any pair gets all-zero counts and its
    flag cleared.
    """
    if embeddings.size < 2:
        raise ValueError("cosine_histogram needs at least two embeddings")
    if max_pairs < 1:
        raise ValueError("max_pairs must be >= 1")

    rng = derive_rng(seed, "histogram")
    z = embeddings.embeddings.values
    labels = np.asarray(embeddings.labels, dtype=np.int64)
    intra_total, inter_total = _pair_counts(labels)

    intra = _category_values(z, labels, True, intra_total, max_pairs, rng)
    inter = _category_values(z, labels, False, inter_total, max_pairs, rng)
    edges = histogram_edges()
    intra_counts, intra_mean = _bin(intra, edges)
    inter_counts, inter_mean = _bin(inter, edges)
    return SimilarityHistogram(
        bin_edges=edges,
        intra_counts=intra_counts,
        inter_counts=inter_counts,
        has_intra=bool(intra.size),
        has_inter=bool(inter.size),
        intra_mean=intra_mean,
        inter_mean=inter_mean,
    )
