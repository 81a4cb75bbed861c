"""
Tensor values and the reverse-mode gradient tape.

A Tensor is an immutable float64 array. Tensors created from a GradientTape
(``tape.watch``) are leaves; every op applied to a taped tensor records its
output on the same tape together with a closure mapping the output adjoint to
the adjoints of its inputs. ``tape.backward`` walks the records in reverse
creation order, which is always a valid reverse topological order.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

BackwardFn = Callable[[np.ndarray], Tuple[np.ndarray, ...]]


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


class Tensor:
    """Immutable dense float64 array, optionally recorded on a GradientTape."""

    __slots__ = ('values', '_tape', '_parents', '_backward', 'name')

    def __init__(self, values, name: Optional[str] = None):
        self.values: np.ndarray = _frozen(values)
        self._tape: Optional['GradientTape'] = None
        self._parents: Tuple['Tensor', ...] = ()
        self._backward: Optional[BackwardFn] = None
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def tracked(self) -> bool:
        return self._tape is not None

    def item(self) -> float:
        return float(self.values)

    def numpy(self) -> np.ndarray:
        return self.values

    def __float__(self) -> float:
        return self.item()

    def __repr__(self) -> str:
        tag = f" name={self.name!r}" if self.name else ''
        return f"Tensor(shape={self.shape}{tag}, tracked={self.tracked})"


def as_tensor(value) -> Tensor:
    """Wrap arrays and scalars as constant tensors; pass tensors through."""
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


def record(values: np.ndarray, parents: Sequence[Tensor], backward: BackwardFn) -> Tensor:
    """Build an op output and record it on the first tape found among its parents."""
    out = Tensor(values)
    tape = next((p._tape for p in parents if p._tape is not None), None)
    if tape is not None:
        out._tape = tape
        out._parents = tuple(parents)
        out._backward = backward
        tape._records.append(out)
    return out


class GradientTape:
    """
    Records operations for one forward pass and computes adjoints.

    One tape per client per batch; tapes are not shared between threads.
    """

    def __init__(self):
        self._records: List[Tensor] = []
        self._adjoints: Dict[int, np.ndarray] = {}

    def watch(self, values, name: Optional[str] = None) -> Tensor:
        """Create a leaf tensor whose adjoint will be tracked."""
        leaf = Tensor(values, name=name)
        leaf._tape = self
        self._records.append(leaf)
        return leaf

    def __len__(self) -> int:
        return len(self._records)

    def backward(self, target: Tensor) -> None:
        """Propagate d(target)/d(node) to every recorded node."""
        if target._tape is not self:
            raise ValueError("Target tensor was not recorded on this tape")
        if target.values.size != 1:
            raise ValueError(f"backward() needs a scalar target, got shape {target.shape}")

        adjoints: Dict[int, np.ndarray] = {id(target): np.ones_like(target.values)}
        for node in reversed(self._records):
            grad = adjoints.get(id(node))
            if grad is None or node._backward is None:
                continue
            parent_grads = node._backward(grad)
            for parent, parent_grad in zip(node._parents, parent_grads):
                if parent._tape is not self or parent_grad is None:
                    continue
                key = id(parent)
                if key in adjoints:
                    adjoints[key] = adjoints[key] + parent_grad
                else:
                    adjoints[key] = np.asarray(parent_grad, dtype=np.float64)
        self._adjoints = adjoints

    def adjoint(self, leaf: Tensor) -> np.ndarray:
        """Adjoint of ``leaf`` from the last backward(); zeros if it did not influence the target."""
        grad = self._adjoints.get(id(leaf))
        if grad is None:
            return np.zeros_like(leaf.values)
        return np.reshape(grad, leaf.shape)

    def gradient(self, target: Tensor, sources: Sequence[Tensor]) -> List[np.ndarray]:
        self.backward(target)
        return [self.adjoint(source) for source in sources]
