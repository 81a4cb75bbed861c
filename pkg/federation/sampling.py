"""
Per-round client sampling.
"""

import math
from typing import List

from utils.seeding import derive_rng


def participants_per_round(n_clients: int, fraction: float) -> int:
    """⌈fraction·n_clients⌉, clamped to [1, n_clients]."""
    # round first so 0.05·100 does not become 5.000000000000001 → 6
    k = math.ceil(round(fraction * n_clients, 9))
    return max(1, min(n_clients, k))


def sample_clients(n_clients: int, fraction: float, round: int, seed: int) -> List[int]:
    """Distinct client ids drawn uniformly without replacement, sorted; deterministic in (seed, round)."""
    if n_clients < 1:
        raise ValueError(f"n_clients must be >= 1, got {n_clients}")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    k = participants_per_round(n_clients, fraction)
    if k == n_clients:
        return list(range(n_clients))
    chosen = derive_rng(seed, "sampling", round).choice(n_clients, size=k, replace=False)
    return sorted(int(c) for c in chosen)
