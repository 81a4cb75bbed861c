"""
Server-side aggregation of client parameters and class prototypes.

Updates are reduced in ascending client-id order, so the floating-point
result does not depend on the order clients finished in. Both parameter
rules accumulate Σ w_k·θ_k; the uniform rule uses w_k = 1/K and the weighted
rule w_k = n_k/Σn, which is bitwise 1/K when all n_k are equal.
"""

from typing import List, Sequence

import numpy as np

from core.errors import DimensionError
from core.modes import AggregationRule
from models.embeddings import PrototypeSet
from models.federation import ClientUpdate
from numerics.ops import NORM_EPS
from numerics.parameters import ParameterVector


def _ordered(updates: Sequence[ClientUpdate]) -> List[ClientUpdate]:
    if not updates:
        raise ValueError("Cannot aggregate an empty list of updates")
    ordered = sorted(updates, key=lambda u: u.client_id)
    first = ordered[0].params
    for update in ordered[1:]:
        if not first.same_manifest(update.params):
            raise DimensionError(f"Client {update.client_id} sent parameters with a different manifest")
    return ordered


def _weighted_sum(updates: List[ClientUpdate], weights: List[float]) -> ParameterVector:
    total = np.zeros_like(updates[0].params.values)
    for update, weight in zip(updates, weights):
        total += weight * update.params.values
    return updates[0].params.with_values(total)


def aggregate_uniform(updates: Sequence[ClientUpdate]) -> ParameterVector:
    """θ = (1/K) Σ θ_k."""
    ordered = _ordered(updates)
    weight = 1.0 / len(ordered)
    return _weighted_sum(ordered, [weight] * len(ordered))


def aggregate_weighted(updates: Sequence[ClientUpdate]) -> ParameterVector:
    """θ = Σ (n_k / Σn) θ_k."""
    ordered = _ordered(updates)
    total = sum(int(u.n_samples) for u in ordered)
    if total <= 0:
        raise ValueError("Weighted aggregation needs a positive total sample count")
    return _weighted_sum(ordered, [int(u.n_samples) / total for u in ordered])


def aggregate(updates: Sequence[ClientUpdate], rule: AggregationRule) -> ParameterVector:
    if AggregationRule(rule) is AggregationRule.WEIGHTED:
        return aggregate_weighted(updates)
    return aggregate_uniform(updates)


def aggregate_prototypes(updates: Sequence[ClientUpdate], previous: PrototypeSet,
                         center: bool = False) -> PrototypeSet:
    """
    Pool the clients' class sums and counts: c_γ = normalize(Σ sums_γ / Σ counts_γ).
    Classes nobody saw keep the previous prototype and are flagged stale.

    With ``center``, the mean of the pooled centroids of the classes seen this
    round is subtracted before normalizing, so the prototypes cannot all share
    one dominant direction. Fewer than two seen classes are left uncentered.
    """
    ordered = sorted(updates, key=lambda u: u.client_id)
    n_classes = previous.n_classes
    sums = np.zeros_like(previous.prototypes)
    counts = np.zeros(n_classes, dtype=np.int64)
    for update in ordered:
        if update.n_classes != n_classes or update.class_sums.shape != sums.shape:
            raise DimensionError(f"Client {update.client_id} reported class sums of shape {update.class_sums.shape}")
        sums += update.class_sums
        counts += update.class_counts

    seen = np.flatnonzero(counts)
    centroids = sums[seen] / counts[seen, None]
    if center and seen.size >= 2:
        centroids = centroids - centroids.mean(axis=0)

    prototypes = np.array(previous.prototypes)
    stale = np.ones(n_classes, dtype=bool)
    for gamma, centroid in zip(seen, centroids):
        norm = np.linalg.norm(centroid)
        if norm > NORM_EPS:
            prototypes[gamma] = centroid / norm
            stale[gamma] = False
    return PrototypeSet(prototypes, counts, stale)
