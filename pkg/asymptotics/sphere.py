"""
Synthetic data on the unit sphere and fixed encoders for the convergence harness.
"""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

Encoder = Callable[[np.ndarray], np.ndarray]


def _normalize_rows(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@dataclass(frozen=True)
class SphereDistribution:
    """
    Data: uniform on S^{dim−1}. Positives: the anchor plus N(0, I/κ) jitter,
    projected back onto the sphere; larger κ gives tighter positive pairs.
    """

    dim: int = 8
    kappa: float = 100.0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _normalize_rows(rng.standard_normal((n, self.dim)))

    def positives(self, anchors: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        jitter = rng.standard_normal(anchors.shape) / np.sqrt(self.kappa)
        return _normalize_rows(anchors + jitter)

    def sample_pairs(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """n positive pairs (x, y) ~ p_pos."""
        anchors = self.sample(rng, n)
        return anchors, self.positives(anchors, rng)


def identity_encoder(x: np.ndarray) -> np.ndarray:
    return x


def constant_encoder(vector: np.ndarray) -> Encoder:
    """Collapsed encoder mapping every input to the same unit vector."""
    v = np.asarray(vector, dtype=np.float64)
    v = v / np.linalg.norm(v)

    def encode(x: np.ndarray) -> np.ndarray:
        return np.broadcast_to(v, (x.shape[0], v.size)).copy()

    return encode
