"""
Experiment configuration: the training configuration plus data, partition,
model, metric and asymptotics sections.
"""

import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from core.errors import ConfigError
from .federation import TrainingConfig
from .partition_plan import IID_MARKER


def _from_section(cls, data: Optional[Dict[str, Any]], section: str):
    data = dict(data or {})
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"Unknown keys in section '{section}': {sorted(unknown)}")
    return cls(**data)


@dataclass(frozen=True)
class DataConfig:
    source: str = 'synthetic'
    n_classes: int = 10
    dim: int = 32
    n_per_class: int = 200
    spread: float = 1.0
    test_fraction: float = 0.2
    cifar_train_path: Optional[str] = None
    cifar_test_path: Optional[str] = None

    def validate(self) -> None:
        if self.source not in ('synthetic', 'cifar10'):
            raise ConfigError(f"data.source must be 'synthetic' or 'cifar10', got {self.source!r}")
        if self.source == 'synthetic':
            if self.n_classes < 2 or self.dim < 2 or self.n_per_class < 1:
                raise ConfigError("synthetic data needs n_classes >= 2, dim >= 2, n_per_class >= 1")
            if not self.spread > 0:
                raise ConfigError("data.spread must be positive")
            if not 0.0 < self.test_fraction < 1.0:
                raise ConfigError("data.test_fraction must lie in (0, 1)")
        elif not self.cifar_train_path or not self.cifar_test_path:
            raise ConfigError("cifar10 source needs cifar_train_path and cifar_test_path")


@dataclass(frozen=True)
class PartitionConfig:
    alpha: Optional[float] = 0.3
    min_size: Optional[int] = None
    max_retries: int = 100
    plan_file: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.alpha, str):
            if self.alpha.lower() not in (IID_MARKER, 'inf', 'infinity'):
                raise ConfigError(f"partition.alpha must be a number or 'iid', got {self.alpha!r}")
            object.__setattr__(self, 'alpha', None)
        elif self.alpha is not None and self.alpha == float('inf'):
            object.__setattr__(self, 'alpha', None)

    @property
    def is_iid(self) -> bool:
        return self.alpha is None

    def validate(self) -> None:
        if self.alpha is not None and not self.alpha > 0:
            raise ConfigError(f"partition.alpha must be positive, got {self.alpha}")
        if self.min_size is not None and self.min_size < 1:
            raise ConfigError("partition.min_size must be >= 1")
        if self.max_retries < 1:
            raise ConfigError("partition.max_retries must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['alpha'] = IID_MARKER if self.alpha is None else self.alpha
        return data


@dataclass(frozen=True)
class ModelConfig:
    hidden_dims: Tuple[int, ...] = (128,)
    feature_dim: int = 64
    embedding_dim: int = 64

    def __post_init__(self):
        object.__setattr__(self, 'hidden_dims', tuple(int(d) for d in self.hidden_dims))

    def validate(self) -> None:
        if any(d < 1 for d in self.hidden_dims) or self.feature_dim < 1 or self.embedding_dim < 1:
            raise ConfigError("model layer sizes must be positive")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['hidden_dims'] = list(self.hidden_dims)
        return data


@dataclass(frozen=True)
class MetricsConfig:
    ema_beta: float = 0.9
    align_exponent: float = 2.0
    uniform_t: float = 2.0
    histogram_max_pairs: int = 100_000
    metric_sample_size: int = 1000

    def validate(self) -> None:
        if not 0.0 <= self.ema_beta < 1.0:
            raise ConfigError("metrics.ema_beta must lie in [0, 1)")
        if not self.align_exponent > 0 or not self.uniform_t > 0:
            raise ConfigError("metrics.align_exponent and metrics.uniform_t must be positive")
        if self.histogram_max_pairs < 1 or self.metric_sample_size < 2:
            raise ConfigError("metrics sample caps are too small")


@dataclass(frozen=True)
class AsymptoticsConfig:
    tau: float = 0.5
    dim: int = 8
    kappa: float = 100.0
    m_grid: Tuple[int, ...] = (10, 100, 1000, 10_000, 100_000)
    trials: int = 2000
    inner_samples: int = 100_000

    def __post_init__(self):
        object.__setattr__(self, 'm_grid', tuple(int(m) for m in self.m_grid))

    def validate(self) -> None:
        if not self.tau > 0:
            raise ConfigError("asymptotics.tau must be positive")
        if self.dim < 2 or not self.kappa > 0:
            raise ConfigError("asymptotics.dim must be >= 2 and kappa positive")
        if not self.m_grid or any(m < 1 for m in self.m_grid):
            raise ConfigError("asymptotics.m_grid must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(self.m_grid, self.m_grid[1:])):
            raise ConfigError("asymptotics.m_grid must be strictly increasing")
        if self.trials < 1 or self.inner_samples < 1:
            raise ConfigError("asymptotics.trials and inner_samples must be >= 1")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['m_grid'] = list(self.m_grid)
        return data


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one CLI run needs; ``seed`` drives every random sub-stream."""

    seed: int = 0
    output_dir: str = 'runs/default'
    workers: int = 1
    data: DataConfig = field(default_factory=DataConfig)
    partition: PartitionConfig = field(default_factory=PartitionConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    asymptotics: AsymptoticsConfig = field(default_factory=AsymptoticsConfig)

    def __post_init__(self):
        if self.training.seed != self.seed:
            object.__setattr__(self, 'training', replace(self.training, seed=self.seed))

    @property
    def min_size(self) -> int:
        """Smallest client dataset; defaults to one full batch."""
        if self.partition.min_size is not None:
            return self.partition.min_size
        return self.training.batch_size

    def validate(self, check_paths: bool = True) -> 'ExperimentConfig':
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.data.validate()
        self.partition.validate()
        self.training.validate()
        self.model.validate()
        self.metrics.validate()
        self.asymptotics.validate()
        if check_paths:
            self._check_output_writable()
        return self

    def _check_output_writable(self) -> None:
        path = Path(self.output_dir)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"Cannot create output directory {path}: {exc}") from exc
        if not os.access(path, os.W_OK):
            raise ConfigError(f"Output directory is not writable: {path}")

    def to_dict(self) -> Dict[str, Any]:
        training = self.training.to_dict()
        training.pop('seed')
        return {
            'seed': self.seed,
            'output_dir': self.output_dir,
            'workers': self.workers,
            'data': asdict(self.data),
            'partition': self.partition.to_dict(),
            'training': training,
            'model': self.model.to_dict(),
            'metrics': asdict(self.metrics),
            'asymptotics': self.asymptotics.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown top-level config keys: {sorted(unknown)}")
        seed = int(data.get('seed', 0))
        training = dict(data.get('training') or {})
        training['seed'] = seed
        try:
            return cls(
                seed=seed,
                output_dir=str(data.get('output_dir', cls.output_dir)),
                workers=int(data.get('workers', 1)),
                data=_from_section(DataConfig, data.get('data'), 'data'),
                partition=_from_section(PartitionConfig, data.get('partition'), 'partition'),
                training=TrainingConfig.from_dict(training),
                model=_from_section(ModelConfig, data.get('model'), 'model'),
                metrics=_from_section(MetricsConfig, data.get('metrics'), 'metrics'),
                asymptotics=_from_section(AsymptoticsConfig, data.get('asymptotics'), 'asymptotics'),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"Invalid configuration: {exc}") from exc
