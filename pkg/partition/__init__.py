"""
Client partitioning: Dirichlet label skew or IID shards.
"""

from typing import Optional

import numpy as np

from models.partition_plan import PartitionPlan
from .dirichlet import dirichlet_partition, largest_remainder_split, DEFAULT_MAX_RETRIES
from .iid import iid_partition
from .stats import class_histograms, total_variation_from_global, mean_label_skew


def create_plan(
    labels,
    n_clients: int,
    alpha: Optional[float],
    seed: int,
    min_size: int = 1,
    n_classes: Optional[int] = None,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> PartitionPlan:
    """Dirichlet plan for a numeric alpha, IID plan for None; per-client histograms attached."""
    labels = np.asarray(labels, dtype=np.int64)
    if alpha is None:
        plan = iid_partition(labels, n_clients, seed, min_size)
    else:
        plan = dirichlet_partition(labels, n_clients, alpha, seed, min_size, max_retries)
    if n_classes is None:
        n_classes = int(labels.max()) + 1 if labels.size else 0
    return plan.with_histograms(labels, n_classes)


__all__ = [
    'create_plan',
    'dirichlet_partition',
    'iid_partition',
    'largest_remainder_split',
    'class_histograms',
    'total_variation_from_global',
    'mean_label_skew',
    'DEFAULT_MAX_RETRIES',
]
