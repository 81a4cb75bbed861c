"""
Federation data models: training configuration, server state and client updates.
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Optional

import numpy as np

from core.errors import ConfigError
from core.modes import AggregationRule, TrainingMode
from numerics.parameters import ParameterVector
from .embeddings import PrototypeSet

LAMBDA_SUM_TOL = 1e-9


@dataclass(frozen=True)
class TrainingConfig:
    """
    Federated training hyperparameters.
    Defaults: lr 0.01 with per-round decay 0.998,
    weight decay 5e-4, batch 64, 5 local epochs, τ=0.5, λ_a=0.9, λ_u=0.1.
    """

    rounds: int = 100
    n_clients: int = 100
    participation: float = 0.05
    local_epochs: int = 5
    batch_size: int = 64
    tau: float = 0.5
    lambda_a: float = 0.9
    lambda_u: float = 0.1
    mu: float = 10.0
    lr: float = 0.01
    lr_decay: float = 0.998
    weight_decay: float = 5e-4
    mode: TrainingMode = TrainingMode.PROTOTYPE_WISE
    aggregation: AggregationRule = AggregationRule.UNIFORM
    seed: int = 0
    divergence_threshold: float = 1e6
    # subtract the mean of the class centroids before normalizing prototypes
    prototype_centering: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'mode', TrainingMode(self.mode))
        object.__setattr__(self, 'aggregation', AggregationRule(self.aggregation))

    def validate(self) -> 'TrainingConfig':
        """Raise ConfigError on the first invalid field; return self otherwise."""
        if self.rounds < 0:
            raise ConfigError(f"rounds must be >= 0, got {self.rounds}")
        if self.n_clients < 1:
            raise ConfigError(f"n_clients must be >= 1, got {self.n_clients}")
        if not 0.0 < self.participation <= 1.0:
            raise ConfigError(f"participation must lie in (0, 1], got {self.participation}")
        if self.participation * self.n_clients < 1.0 - 1e-9:
            raise ConfigError("participation · n_clients must be at least 1")
        if self.local_epochs < 1:
            raise ConfigError(f"local_epochs must be >= 1, got {self.local_epochs}")
        if self.batch_size < 2:
            raise ConfigError("batch_size must be >= 2 so contrastive pairs exist")
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.mu < 0:
            raise ConfigError(f"mu must be non-negative, got {self.mu}")
        if not self.lr > 0:
            raise ConfigError(f"lr must be positive, got {self.lr}")
        if not 0.0 < self.lr_decay <= 1.0:
            raise ConfigError(f"lr_decay must lie in (0, 1], got {self.lr_decay}")
        if self.weight_decay < 0:
            raise ConfigError(f"weight_decay must be non-negative, got {self.weight_decay}")
        if self.divergence_threshold <= 0:
            raise ConfigError("divergence_threshold must be positive")
        if not isinstance(self.prototype_centering, bool):
            raise ConfigError(f"prototype_centering must be true or false, got {self.prototype_centering!r}")
        if self.mode.uses_decoupled_loss:
            for name in ('lambda_a', 'lambda_u'):
                value = getattr(self, name)
                if not 0.0 < value < 1.0:
                    raise ConfigError(f"{name} must lie in (0, 1), got {value}")
            if abs(self.lambda_a + self.lambda_u - 1.0) > LAMBDA_SUM_TOL:
                raise ConfigError(
                    f"lambda_a + lambda_u must equal 1, got {self.lambda_a} + {self.lambda_u}"
                )
        return self

    def lr_at(self, completed_rounds: int) -> float:
        """η after ``completed_rounds`` rounds: lr₀ · decay^t."""
        return self.lr * self.lr_decay ** completed_rounds

    def with_overrides(self, **changes) -> 'TrainingConfig':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['mode'] = self.mode.value
        data['aggregation'] = self.aggregation.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainingConfig':
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown training keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True, eq=False)
class ServerState:
    """θ_t, the broadcast prototypes and the current learning rate η_t."""

    round: int
    params: ParameterVector
    lr: float
    prototypes: Optional[PrototypeSet] = None

    def __post_init__(self):
        if self.round < 0:
            raise ValueError("round must be non-negative")
        if not self.lr > 0:
            raise ValueError("lr must be positive")


@dataclass(frozen=True, eq=False)
class ClientUpdate:
    """
    What a client sends back after local training: θ_t^k, its sample count n_k,
    and per-class sums/counts of its final embeddings for prototype pooling.
    """

    client_id: int
    params: ParameterVector
    n_samples: int
    class_sums: np.ndarray
    class_counts: np.ndarray
    train_loss: float = 0.0
    batches: int = 0
    fallback_batches: int = 0

    def __post_init__(self):
        class_counts = np.array(self.class_counts, dtype=np.int64).reshape(-1)
        class_sums = np.array(self.class_sums, dtype=np.float64)
        if class_sums.ndim != 2 or class_sums.shape[0] != class_counts.size:
            raise ValueError("class_sums must have one row per class")
        if int(class_counts.sum()) != int(self.n_samples):
            raise ValueError("n_samples must equal the sum of class counts")
        object.__setattr__(self, 'class_counts', class_counts)
        object.__setattr__(self, 'class_sums', class_sums)

    @property
    def n_classes(self) -> int:
        return int(self.class_counts.size)

    def bitwise_equal(self, other: 'ClientUpdate') -> bool:
        return (
            self.client_id == other.client_id
            and self.params.bitwise_equal(other.params)
            and self.n_samples == other.n_samples
            and self.class_sums.tobytes() == other.class_sums.tobytes()
            and np.array_equal(self.class_counts, other.class_counts)
        )
