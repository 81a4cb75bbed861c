"""
Shared fixtures: seeded generators, tiny synthetic datasets, tiny MLPs and
random unit-norm embedding batches.
"""

import numpy as np
import pytest

from data.synthetic import synthetic_blobs
from models.embeddings import EmbeddingBatch, PrototypeSet
from models.federation import TrainingConfig
from numerics.model import MLPArchitecture, MLPModel
from partition import create_plan


def random_unit_rows(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    raw = rng.standard_normal((n, dim))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def random_batch(rng: np.random.Generator, size: int, n_classes: int, dim: int) -> EmbeddingBatch:
    labels = rng.integers(0, n_classes, size=size)
    return EmbeddingBatch.from_array(random_unit_rows(rng, size, dim), labels, n_classes)


def random_prototypes(rng: np.random.Generator, n_classes: int, dim: int) -> PrototypeSet:
    return PrototypeSet(random_unit_rows(rng, n_classes, dim),
                        np.ones(n_classes, dtype=np.int64), np.zeros(n_classes, dtype=bool))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def tiny_data():
    """3 well-separated classes in 4-D: 57 training and 15 test samples."""
    return synthetic_blobs(n_classes=3, dim=4, n_per_class=24, spread=0.3, seed=7)


@pytest.fixture(scope="session")
def tiny_arch():
    return MLPArchitecture(input_dim=4, n_classes=3, hidden_dims=(8,), feature_dim=6, embedding_dim=5)


@pytest.fixture(scope="session")
def tiny_model(tiny_arch):
    return MLPModel(tiny_arch)


@pytest.fixture
def tiny_params(tiny_model):
    return tiny_model.init_params(np.random.default_rng(0))


@pytest.fixture
def tiny_cfg():
    return TrainingConfig(
        rounds=2,
        n_clients=3,
        participation=1.0,
        local_epochs=1,
        batch_size=8,
        mu=1.0,
        lr=0.05,
        mode='prototype_wise',
        seed=3,
    )


@pytest.fixture
def tiny_plan(tiny_data, tiny_cfg):
    train, _ = tiny_data
    return create_plan(train.labels, tiny_cfg.n_clients, None, tiny_cfg.seed,
                       min_size=tiny_cfg.batch_size, n_classes=train.n_classes)
