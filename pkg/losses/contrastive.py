"""
Contrastive objectives over a batch of unit-norm embeddings.

All losses average over the anchors that take part, so the regularizer
weight μ does not depend on the batch size:

    supcon_loss               −Σ_{j∈P_i} log softmax_{k≠i}(s_ik)[j]
    supcon_decomposed         −Σ_{p∈P_i} s_ip + |P_i| · log Σ_{k≠i} exp(s_ik)
    decoupled_sample_loss     −λ_a Σ_{p∈P_i} s_ip + λ_u |P_i| · log Σ_{n∈N_i} exp(s_in)
    decoupled_prototype_loss  the same with P_i = {c_{y_i}} and N_i = {c_γ : γ ≠ y_i}

where s = sim(·, ·)/τ is the temperature-scaled cosine similarity.
"""

from typing import Tuple

import numpy as np

from core.errors import DimensionError, InsufficientClassesError, LabelRangeError, NoPositivesError, NoUsableAnchorsError
from models.embeddings import EmbeddingBatch, LossBreakdown, PrototypeSet
from numerics import ops
from numerics.tensor import Tensor


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not tau > 0:
        raise ValueError(f"Temperature must be positive, got {tau}")
    return tau


def _scaled_similarities(batch: EmbeddingBatch, tau: float) -> Tensor:
    """B×B matrix z_i·z_k / τ; rows are unit-norm so the dot product is the cosine."""
    z = batch.embeddings
    return ops.scale(ops.matmul(z, ops.transpose(z)), 1.0 / tau)


def _anchor_mean(per_anchor: Tensor, usable: np.ndarray) -> Tensor:
    weights = usable.astype(np.float64) / float(usable.sum())
    return ops.reduce_sum(ops.multiply(per_anchor, weights))


def _usable_anchors(positive: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    counts = positive.sum(axis=1).astype(np.float64)
    return counts, counts > 0


# ==============================================
# Supervised contrastive loss
# ==============================================

def supcon_loss(batch: EmbeddingBatch, tau: float) -> Tensor:
    """Supervised contrastive loss, evaluated one log-ratio per positive pair."""
    tau = _check_tau(tau)
    positive = batch.positive_mask()
    _, usable = _usable_anchors(positive)
    if not usable.any():
        raise NoPositivesError("No anchor in the batch has a same-class partner")

    logits = _scaled_similarities(batch, tau)
    denominators = ops.masked_log_sum_exp(logits, batch.others_mask(), axis=1, keepdims=True)
    log_ratios = ops.subtract(logits, denominators)
    per_anchor = ops.negate(ops.reduce_sum(ops.multiply(log_ratios, positive.astype(np.float64)), axis=1))
    return _anchor_mean(per_anchor, usable)


def supcon_decomposed(batch: EmbeddingBatch, tau: float) -> Tensor:
    """
    The same loss with numerator and denominator separated: the denominator
    does not depend on the positive index, so it factors out |P_i| times.
    """
    tau = _check_tau(tau)
    positive = batch.positive_mask()
    counts, usable = _usable_anchors(positive)
    if not usable.any():
        raise NoPositivesError("No anchor in the batch has a same-class partner")

    logits = _scaled_similarities(batch, tau)
    attraction = ops.reduce_sum(ops.multiply(logits, positive.astype(np.float64)), axis=1)
    denominators = ops.masked_log_sum_exp(logits, batch.others_mask(), axis=1)
    per_anchor = ops.subtract(ops.multiply(denominators, counts), attraction)
    return _anchor_mean(per_anchor, usable)


# ==============================================
# Decoupled losses
# ==============================================

def _decoupled(alignment: Tensor, uniformity: Tensor, usable: np.ndarray,
               lambda_a: float, lambda_u: float) -> LossBreakdown:
    per_anchor = ops.add(ops.scale(alignment, -float(lambda_a)), ops.scale(uniformity, float(lambda_u)))
    total = _anchor_mean(per_anchor, usable)
    n_used = int(usable.sum())
    return LossBreakdown(
        total=total,
        alignment_term=float(alignment.values[usable].sum() / n_used),
        uniformity_term=float(uniformity.values[usable].sum() / n_used),
        anchors_used=n_used,
    )


def decoupled_sample_loss(batch: EmbeddingBatch, tau: float, lambda_a: float, lambda_u: float) -> LossBreakdown:
    """
    Decoupled loss with batch samples as positives and negatives.

    Anchors without a same-class partner are skipped. Anchors without any
    other-class sample keep their alignment term only.
    """
    tau = _check_tau(tau)
    positive = batch.positive_mask()
    counts, usable = _usable_anchors(positive)
    if not usable.any():
        raise NoUsableAnchorsError("Every anchor lacks a positive partner")

    logits = _scaled_similarities(batch, tau)
    alignment = ops.reduce_sum(ops.multiply(logits, positive.astype(np.float64)), axis=1)
    repulsion = ops.masked_log_sum_exp(logits, batch.negative_mask(), axis=1)
    uniformity = ops.multiply(repulsion, counts)
    return _decoupled(alignment, uniformity, usable, lambda_a, lambda_u)


def decoupled_prototype_loss(batch: EmbeddingBatch, protos: PrototypeSet, tau: float,
                        lambda_a: float, lambda_u: float) -> LossBreakdown:
    """
    Decoupled loss against global class prototypes. The prototypes are
    constants here: gradients flow into the embeddings only.
    """
    tau = _check_tau(tau)
    n_classes = protos.n_classes
    if n_classes < 2:
        raise InsufficientClassesError(f"Prototype-wise loss needs at least 2 classes, got {n_classes}")
    if protos.dim != batch.dim:
        raise DimensionError(f"Prototype dim {protos.dim} does not match embedding dim {batch.dim}")
    labels = batch.labels
    if labels.max() >= n_classes:
        raise LabelRangeError(f"labels must lie in [0, {n_classes})")

    logits = ops.scale(ops.matmul(batch.embeddings, protos.prototypes.T), 1.0 / tau)
    rows = np.arange(batch.size)
    alignment = ops.gather(logits, rows, labels)
    negative = np.ones((batch.size, n_classes), dtype=bool)
    negative[rows, labels] = False
    uniformity = ops.masked_log_sum_exp(logits, negative, axis=1)
    return _decoupled(alignment, uniformity, np.ones(batch.size, dtype=bool), lambda_a, lambda_u)
