"""
Flat parameter vectors with a layer manifest, the SGD update and the
finite-difference gradient oracle.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from core.errors import DimensionError

Manifest = Tuple[Tuple[str, Tuple[int, ...]], ...]


def _normalize_manifest(manifest) -> Manifest:
    return tuple((str(name), tuple(int(d) for d in shape)) for name, shape in manifest)


def manifest_size(manifest) -> int:
    return sum(int(np.prod(shape, dtype=np.int64)) for _, shape in manifest)


@dataclass(frozen=True, eq=False)
class ParameterVector:
    """
    Model weights θ as one flat float64 array plus an ordered (name, shape) manifest.
    Immutable: every update returns a new vector.
    """

    values: np.ndarray
    manifest: Manifest

    def __post_init__(self):
        manifest = _normalize_manifest(self.manifest)
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if manifest_size(manifest) != values.size:
            raise DimensionError(
                f"Manifest describes {manifest_size(manifest)} elements but {values.size} values were given"
            )
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'manifest', manifest)

    # ==============================================
    # Construction
    # ==============================================

    @classmethod
    def from_layers(cls, manifest, layers: Sequence[np.ndarray]) -> 'ParameterVector':
        manifest = _normalize_manifest(manifest)
        if len(layers) != len(manifest):
            raise DimensionError(f"Expected {len(manifest)} layers, got {len(layers)}")
        chunks = []
        for (name, shape), layer in zip(manifest, layers):
            layer = np.asarray(layer, dtype=np.float64)
            if layer.shape != shape:
                raise DimensionError(f"Layer {name!r} has shape {layer.shape}, manifest says {shape}")
            chunks.append(layer.reshape(-1))
        flat = np.concatenate(chunks) if chunks else np.zeros(0)
        return cls(flat, manifest)

    @classmethod
    def zeros(cls, manifest) -> 'ParameterVector':
        manifest = _normalize_manifest(manifest)
        return cls(np.zeros(manifest_size(manifest)), manifest)

    def with_values(self, values: np.ndarray) -> 'ParameterVector':
        return ParameterVector(values, self.manifest)

    # ==============================================
    # Layer access
    # ==============================================

    def __len__(self) -> int:
        return self.values.size

    def layers(self) -> Iterator[Tuple[str, np.ndarray]]:
        offset = 0
        for name, shape in self.manifest:
            size = int(np.prod(shape, dtype=np.int64))
            yield name, self.values[offset:offset + size].reshape(shape)
            offset += size

    def layer(self, name: str) -> np.ndarray:
        for layer_name, array in self.layers():
            if layer_name == name:
                return array
        raise KeyError(name)

    def layer_dict(self) -> Dict[str, np.ndarray]:
        return dict(self.layers())

    def same_manifest(self, other: 'ParameterVector') -> bool:
        return self.manifest == other.manifest

    def require_same_manifest(self, other: 'ParameterVector') -> None:
        if not self.same_manifest(other):
            raise DimensionError("Parameter manifests differ; vectors are not combinable")

    def bitwise_equal(self, other: 'ParameterVector') -> bool:
        return self.same_manifest(other) and self.values.tobytes() == other.values.tobytes()

    def manifest_as_list(self) -> List[List]:
        return [[name, list(shape)] for name, shape in self.manifest]


def sgd_step(params: ParameterVector, grads: ParameterVector, lr: float, weight_decay: float) -> ParameterVector:
    """θ' = θ − lr·(g + weight_decay·θ)."""
    params.require_same_manifest(grads)
    if lr < 0:
        raise ValueError(f"Learning rate must be non-negative, got {lr}")
    if weight_decay < 0:
        raise ValueError(f"Weight decay must be non-negative, got {weight_decay}")
    update = grads.values + weight_decay * params.values
    return params.with_values(params.values - lr * update)


def finite_diff_gradient(
    f: Callable[[ParameterVector], float],
    at: ParameterVector,
    h: float = 1e-5,
) -> ParameterVector:
    """Central differences (f(θ+h·e_i) − f(θ−h·e_i)) / 2h for every coordinate."""
    if h <= 0:
        raise ValueError(f"Step h must be positive, got {h}")
    base = np.array(at.values)
    grad = np.zeros_like(base)
    for i in range(base.size):
        original = base[i]
        base[i] = original + h
        upper = float(f(at.with_values(base)))
        base[i] = original - h
        lower = float(f(at.with_values(base)))
        base[i] = original
        grad[i] = (upper - lower) / (2.0 * h)
    return at.with_values(grad)
