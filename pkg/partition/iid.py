"""
Uniform random split into equal-size client shards.
"""

import numpy as np

from core.errors import PartitionError
from models.partition_plan import PartitionPlan
from utils.seeding import derive_rng


def iid_partition(labels, n_clients: int, seed: int, min_size: int = 1) -> PartitionPlan:
    """Shuffle all indices and cut them into n_clients shards whose sizes differ by at most one."""
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if n_clients < 1:
        raise PartitionError(f"n_clients must be >= 1, got {n_clients}")
    if labels.size < n_clients:
        raise PartitionError(f"{labels.size} samples are fewer than {n_clients} clients")
    if labels.size // n_clients < min_size:
        raise PartitionError(
            f"IID shards of {labels.size // n_clients} samples are below min_size={min_size}"
        )

    order = derive_rng(seed, "partition", "iid").permutation(labels.size)
    shards = np.array_split(order, n_clients)
    return PartitionPlan([np.sort(shard) for shard in shards], None, seed, min_size)
