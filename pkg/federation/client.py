"""
Local client training: E epochs of mini-batch SGD on L_CE + μ·L_reg.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import DivergenceError, NoPositivesError, NoUsableAnchorsError
from core.modes import TrainingMode
from data.batching import batch_iterator
from losses import combined_objective, decoupled_prototype_loss, decoupled_sample_loss, supcon_loss
from models.dataset import DatasetView, LabeledBatch
from models.embeddings import EmbeddingBatch, PrototypeSet
from models.federation import ClientUpdate, TrainingConfig
from numerics import ops
from numerics.model import MLPModel
from numerics.parameters import ParameterVector, sgd_step
from numerics.tensor import GradientTape, Tensor
from utils.seeding import stream_seed


@dataclass(frozen=True)
class BatchStep:
    loss: float
    grads: ParameterVector
    fell_back: bool


def regularizer(embeddings: EmbeddingBatch, protos: Optional[PrototypeSet], cfg: TrainingConfig) -> Tensor:
    """The contrastive term selected by ``cfg.mode``."""
    if cfg.mode is TrainingMode.SUPCON_BASELINE:
        return supcon_loss(embeddings, cfg.tau)
    if cfg.mode is TrainingMode.SAMPLE_WISE:
        return decoupled_sample_loss(embeddings, cfg.tau, cfg.lambda_a, cfg.lambda_u).total
    if cfg.mode is TrainingMode.PROTOTYPE_WISE:
        return decoupled_prototype_loss(embeddings, protos, cfg.tau, cfg.lambda_a, cfg.lambda_u).total
    raise ValueError(f"Mode {cfg.mode.value} has no regularizer")


def batch_gradients(model: MLPModel, params: ParameterVector, batch: LabeledBatch,
                    protos: Optional[PrototypeSet], cfg: TrainingConfig) -> BatchStep:
    """
    Loss and parameter gradient for one batch. With μ = 0 or plain FedAvg the
    contrastive term is never built. A batch where no anchor has a positive
    partner trains on cross-entropy alone.
    """
    tape = GradientTape()
    output = model.forward(params, batch.inputs, tape)
    loss = ops.softmax_cross_entropy(output.logits, batch.labels)
    fell_back = False
    if cfg.mu > 0 and cfg.mode is not TrainingMode.FEDAVG_PLAIN:
        embeddings = EmbeddingBatch(output.embeddings, batch.labels, model.architecture.n_classes)
        try:
            loss = combined_objective(loss, regularizer(embeddings, protos, cfg), cfg.mu)
        except (NoPositivesError, NoUsableAnchorsError):
            fell_back = True
    grads = model.gradients(tape, output, loss)
    return BatchStep(loss=loss.item(), grads=grads, fell_back=fell_back)


def class_embedding_sums(model: MLPModel, params: ParameterVector, view: DatasetView):
    """Per-class sums and counts of the normalized embeddings of every sample in ``view``."""
    n_classes = model.architecture.n_classes
    embeddings = model.embed(params, view.inputs)
    labels = view.labels
    sums = np.zeros((n_classes, embeddings.shape[1]))
    np.add.at(sums, labels, embeddings)
    counts = np.bincount(labels, minlength=n_classes)
    return sums, counts


def local_update(
    global_params: ParameterVector,
    view: DatasetView,
    protos: Optional[PrototypeSet],
    cfg: TrainingConfig,
    round: int,
    client_id: int,
    model: MLPModel,
    lr: Optional[float] = None,
) -> ClientUpdate:
    """
    Start from the broadcast θ, run ``cfg.local_epochs`` epochs of seeded
    mini-batch SGD, then report θ_k, n_k and the class sums of a final
    embedding pass with the updated encoder.

    The shuffle of each epoch is keyed by (seed, round, client, epoch), so the
    update does not depend on which thread runs it or when.

    Raises:
        DivergenceError: a batch loss is non-finite or above the divergence threshold
        DegenerateInputError: an embedding collapsed to zero norm
    """
    model.check_params(global_params)
    if cfg.mode is TrainingMode.PROTOTYPE_WISE and cfg.mu > 0 and protos is None:
        raise ValueError("prototype_wise training needs the broadcast prototypes")
    lr = cfg.lr_at(round) if lr is None else lr

    params = global_params
    losses = []
    fallback_batches = 0
    for epoch in range(cfg.local_epochs):
        epoch_seed = stream_seed(cfg.seed, "client", round, client_id, epoch)
        for batch in batch_iterator(view, cfg.batch_size, epoch_seed):
            step = batch_gradients(model, params, batch, protos, cfg)
            if not np.isfinite(step.loss) or abs(step.loss) > cfg.divergence_threshold:
                raise DivergenceError(round, client_id, step.loss)
            params = sgd_step(params, step.grads, lr, cfg.weight_decay)
            losses.append(step.loss)
            fallback_batches += int(step.fell_back)

    sums, counts = class_embedding_sums(model, params, view)
    return ClientUpdate(
        client_id=client_id,
        params=params,
        n_samples=len(view),
        class_sums=sums,
        class_counts=counts,
        train_loss=float(np.mean(losses)),
        batches=len(losses),
        fallback_batches=fallback_batches,
    )
