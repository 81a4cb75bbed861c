"""
Federated Server
Runs the round loop: sample → broadcast → local updates → aggregate → decay lr → evaluate.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from silantui import ModernLogger

from core.errors import ConfigError, DivergenceError
from core.modes import TrainingMode
from executors.client_executor import ClientExecutor
from metrics.accuracy import AccuracyTracker, accuracy
from metrics.representation import metric_sample_indices, representation_metrics
from models.dataset import Dataset
from models.embeddings import PrototypeSet
from models.experiment import MetricsConfig
from models.federation import ClientUpdate, ServerState, TrainingConfig
from models.partition_plan import PartitionPlan
from models.records import RoundRecord
from numerics.model import MLPModel
from utils.seeding import derive_rng
from .aggregation import aggregate, aggregate_prototypes
from .client import local_update
from .sampling import sample_clients

RoundCallback = Callable[[RoundRecord, ServerState], None]


@dataclass
class TrainingResult:
    records: List[RoundRecord]
    state: ServerState
    tracker: AccuracyTracker
    diverged: bool = False
    error: Optional[DivergenceError] = None

    @property
    def rounds_completed(self) -> int:
        return len(self.records)

    def summary(self, mode: TrainingMode) -> dict:
        summary = self.tracker.summary()
        summary.update({
            'rounds_completed': self.rounds_completed,
            'mode': TrainingMode(mode).value,
            'diverged': self.diverged,
        })
        return summary


class FederatedServer(ModernLogger):
    """
    Orchestrates federated training over a fixed partition.
    One instance per run; state lives in immutable ServerState values.
    """

    def __init__(
        self,
        cfg: TrainingConfig,
        model: MLPModel,
        train: Dataset,
        test: Dataset,
        plan: PartitionPlan,
        metrics: Optional[MetricsConfig] = None,
        workers: int = 1,
        round_callback: Optional[RoundCallback] = None,
    ):
        super().__init__("FederatedServer")
        self.cfg = cfg.validate()
        self.model = model
        self.train = train
        self.test = test
        self.plan = plan
        self.metrics = metrics or MetricsConfig()
        self.workers = workers
        self.round_callback = round_callback
        self._check_plan()
        self.views = [train.view(indices) for indices in plan.assignments]
        self.eval_indices = self._metric_sample()

    def _check_plan(self) -> None:
        if self.plan.n_clients != self.cfg.n_clients:
            raise ConfigError(
                f"Partition plan has {self.plan.n_clients} clients, training expects {self.cfg.n_clients}"
            )
        if not self.plan.is_disjoint_cover(self.train.n_samples):
            raise ConfigError("Partition plan does not cover the training set exactly once")

    def _metric_sample(self) -> np.ndarray:
        return metric_sample_indices(self.test.n_samples, self.metrics.metric_sample_size, self.cfg.seed)

    # ==============================================
    # State
    # ==============================================

    def initial_state(self) -> ServerState:
        """θ₀ and, for prototype-wise training, pseudo-random initial prototypes."""
        params = self.model.init_params(derive_rng(self.cfg.seed, "model", "init"))
        prototypes = None
        if self.cfg.mode is TrainingMode.PROTOTYPE_WISE:
            arch = self.model.architecture
            prototypes = PrototypeSet.initial(
                arch.n_classes, arch.embedding_dim, derive_rng(self.cfg.seed, "prototypes", "init")
            )
        return ServerState(round=0, params=params, lr=self.cfg.lr_at(0), prototypes=prototypes)

    # ==============================================
    # Rounds
    # ==============================================

    def client_updates(self, state: ServerState, clients: List[int], executor: ClientExecutor) -> List[ClientUpdate]:
        def task(client_id: int) -> ClientUpdate:
            return local_update(
                state.params, self.views[client_id], state.prototypes, self.cfg,
                state.round, client_id, self.model, lr=state.lr,
            )

        updates = executor.map(task, clients)
        return sorted(updates, key=lambda u: u.client_id)

    def evaluate(self, state: ServerState) -> Tuple[float, float, float]:
        """Test accuracy plus alignment and uniformity of a fixed test-embedding sample."""
        acc = accuracy(state.params, self.test, self.model)
        idx = self.eval_indices
        embeddings = self.model.embed(state.params, self.test.inputs[idx])
        align, uniform = representation_metrics(
            embeddings,
            self.test.labels[idx],
            a_exp=self.metrics.align_exponent,
            t=self.metrics.uniform_t,
            max_pairs=self.metrics.histogram_max_pairs,
            rng=derive_rng(self.cfg.seed, "metrics", "pairs"),
        )
        return acc, align, uniform

    def run_round(self, state: ServerState, tracker: AccuracyTracker,
                  executor: ClientExecutor) -> Tuple[ServerState, RoundRecord]:
        t = state.round
        clients = sample_clients(self.cfg.n_clients, self.cfg.participation, t, self.cfg.seed)
        updates = self.client_updates(state, clients, executor)

        params = aggregate(updates, self.cfg.aggregation)
        prototypes = state.prototypes
        if prototypes is not None:
            prototypes = aggregate_prototypes(updates, prototypes, center=self.cfg.prototype_centering)
            stale = int(prototypes.stale.sum())
            if stale:
                self.debug(f"[FederatedServer] Round {t + 1}: {stale} prototypes carried over")
        fallbacks = sum(u.fallback_batches for u in updates)
        if fallbacks:
            self.debug(f"[FederatedServer] Round {t + 1}: {fallbacks} batches trained on cross-entropy only")

        new_state = ServerState(round=t + 1, params=params, lr=self.cfg.lr_at(t + 1), prototypes=prototypes)
        acc, align, uniform = self.evaluate(new_state)
        ema = tracker.update(acc)
        record = RoundRecord(
            round=t + 1,
            client_ids=tuple(clients),
            train_loss=float(np.mean([u.train_loss for u in updates])),
            test_acc=acc,
            ema_acc=ema,
            align_metric=align,
            uniform_metric=uniform,
        )
        return new_state, record

    def run(self, rounds: Optional[int] = None, state: Optional[ServerState] = None) -> TrainingResult:
        """
        Execute ``rounds`` (default cfg.rounds) rounds. A divergence stops the
        loop; the records completed so far are kept and the result is flagged.
        """
        rounds = self.cfg.rounds if rounds is None else rounds
        state = state or self.initial_state()
        result = TrainingResult(records=[], state=state, tracker=AccuracyTracker(self.metrics.ema_beta))
        self.info(
            f"[FederatedServer] Training {rounds} rounds, mode={self.cfg.mode.value}, "
            f"{self.cfg.n_clients} clients, participation={self.cfg.participation}"
        )

        with ClientExecutor(self.workers) as executor:
            for _ in range(rounds):
                try:
                    state, record = self.run_round(state, result.tracker, executor)
                except DivergenceError as exc:
                    self.error(f"[FederatedServer] {exc}")
                    result.diverged = True
                    result.error = exc
                    break
                result.records.append(record)
                result.state = state
                if self.round_callback is not None:
                    self.round_callback(record, state)
                self.info(
                    f"[FederatedServer] Round {record.round}/{rounds}: loss={record.train_loss:.4f} "
                    f"acc={record.test_acc:.4f} ema={record.ema_acc:.4f}"
                )
        return result


def run_training(
    cfg: TrainingConfig,
    plan: PartitionPlan,
    data: Dataset,
    testset: Dataset,
    model: MLPModel,
    metrics: Optional[MetricsConfig] = None,
    workers: int = 1,
    round_callback: Optional[RoundCallback] = None,
) -> List[RoundRecord]:
    """
    Train for cfg.rounds rounds and return one RoundRecord per round.

    Raises:
        DivergenceError: after the records completed before the divergence
            have been passed to ``round_callback``
    """
    server = FederatedServer(cfg, model, data, testset, plan, metrics, workers, round_callback)
    result = server.run()
    if result.diverged:
        raise result.error
    return result.records
