"""
CLI helper methods shared by the commands.
"""

from pathlib import Path
from typing import Optional, Tuple

from data.cifar import load_cifar10_pair
from data.synthetic import synthetic_blobs
from models.dataset import Dataset
from models.experiment import ExperimentConfig
from models.partition_plan import PartitionPlan
from numerics.model import MLPArchitecture, MLPModel
from partition import create_plan
from core.errors import ConfigError


class CLIHelpers:
    """
    Mixin class providing helper methods for CLI operations.
    """

    def _load_datasets(self, cfg: ExperimentConfig) -> Tuple[Dataset, Dataset]:
        """Train and test sets for the configured source."""
        data = cfg.data
        if data.source == 'cifar10':
            return load_cifar10_pair(data.cifar_train_path, data.cifar_test_path)
        train, test = synthetic_blobs(
            data.n_classes, data.dim, data.n_per_class, data.spread, cfg.seed, data.test_fraction
        )
        self.info(f"[ExperimentCLI] Synthetic blobs: {train.n_samples} train / {test.n_samples} test samples")
        return train, test

    def _build_model(self, cfg: ExperimentConfig, train: Dataset) -> MLPModel:
        architecture = MLPArchitecture(
            input_dim=train.input_dim,
            n_classes=train.n_classes,
            hidden_dims=cfg.model.hidden_dims,
            feature_dim=cfg.model.feature_dim,
            embedding_dim=cfg.model.embedding_dim,
        )
        return MLPModel(architecture)

    def _make_plan(self, cfg: ExperimentConfig, train: Dataset, plan_file: Optional[str] = None) -> PartitionPlan:
        """Load ``plan_file`` (or the configured one) if given, otherwise draw a fresh plan."""
        plan_file = plan_file or cfg.partition.plan_file
        if plan_file:
            if not Path(plan_file).exists():
                raise ConfigError(f"Partition plan not found: {plan_file}")
            self.info(f"[ExperimentCLI] Loading partition plan from: {plan_file}")
            return PartitionPlan.load(plan_file)
        return create_plan(
            train.labels,
            cfg.training.n_clients,
            cfg.partition.alpha,
            cfg.seed,
            min_size=cfg.min_size,
            n_classes=train.n_classes,
            max_retries=cfg.partition.max_retries,
        )
