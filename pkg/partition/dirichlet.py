"""
Label-skewed client partitions drawn from a symmetric Dirichlet distribution.
"""

from typing import List, Optional

import numpy as np
from silantui import ModernLogger

from core.errors import PartitionError
from models.partition_plan import PartitionPlan
from utils.seeding import derive_rng

logger = ModernLogger("Partition")

DEFAULT_MAX_RETRIES = 100


def largest_remainder_split(proportions: np.ndarray, total: int) -> np.ndarray:
    """
    Integer counts summing to ``total`` that follow ``proportions``.
    Leftover units go to the largest fractional parts; ties go to the lower index.
    """
    exact = proportions * total
    counts = np.floor(exact).astype(np.int64)
    remainder = int(total - counts.sum())
    if remainder > 0:
        order = np.argsort(-(exact - counts), kind='stable')
        counts[order[:remainder]] += 1
    return counts


def _check_inputs(labels: np.ndarray, n_clients: int, min_size: int) -> None:
    if n_clients < 1:
        raise PartitionError(f"n_clients must be >= 1, got {n_clients}")
    if min_size < 1:
        raise PartitionError(f"min_size must be >= 1, got {min_size}")
    if labels.size < n_clients * min_size:
        raise PartitionError(
            f"{labels.size} samples cannot give {n_clients} clients at least {min_size} samples each"
        )


def _draw(labels: np.ndarray, n_clients: int, alpha: float, rng: np.random.Generator) -> Optional[List[np.ndarray]]:
    buckets: List[List[np.ndarray]] = [[] for _ in range(n_clients)]
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        rng.shuffle(members)
        proportions = rng.dirichlet(np.full(n_clients, alpha))
        if not np.all(np.isfinite(proportions)) or proportions.sum() <= 0:
            return None
        counts = largest_remainder_split(proportions / proportions.sum(), members.size)
        bounds = np.concatenate(([0], np.cumsum(counts)))
        for client in range(n_clients):
            buckets[client].append(members[bounds[client]:bounds[client + 1]])
    return [np.sort(np.concatenate(parts)) for parts in buckets]


def dirichlet_partition(
    labels,
    n_clients: int,
    alpha: float,
    seed: int,
    min_size: int = 1,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> PartitionPlan:
    """
    For every class draw p ~ Dir(α·1) and hand its samples to clients in those
    proportions. The whole plan is redrawn until every client holds at least
    ``min_size`` samples.

    Raises:
        PartitionError: if the constraint still fails after ``max_retries`` draws
    """
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    _check_inputs(labels, n_clients, min_size)
    if not alpha > 0:
        raise PartitionError(f"alpha must be positive, got {alpha}")

    if n_clients == 1:
        return PartitionPlan([np.arange(labels.size)], float(alpha), seed, min_size)

    smallest = 0
    for attempt in range(max_retries):
        rng = derive_rng(seed, "partition", attempt)
        assignments = _draw(labels, n_clients, float(alpha), rng)
        if assignments is None:
            continue
        smallest = min(a.size for a in assignments)
        if smallest >= min_size:
            if attempt:
                logger.debug(f"[Partition] alpha={alpha} satisfied min_size={min_size} after {attempt + 1} draws")
            return PartitionPlan(assignments, float(alpha), seed, min_size)

    raise PartitionError(
        f"No Dir({alpha}) partition over {n_clients} clients met min_size={min_size} "
        f"in {max_retries} draws (last smallest client: {smallest})"
    )
