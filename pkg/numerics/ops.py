"""
Differentiable operations on Tensors.

Each op computes its forward value with numpy and records a backward closure
when any input lives on a GradientTape. Broadcasting follows numpy rules;
adjoints are summed back to the operand shapes.
"""

from typing import Optional, Sequence, Union

import numpy as np

from core.errors import DegenerateInputError, DimensionError, EmptyReductionError, LabelRangeError
from .tensor import Tensor, as_tensor, record

# Norm guard for normalization and cosine similarity
NORM_EPS = 1e-12

TensorLike = Union[Tensor, np.ndarray, float, Sequence[float]]


def _broadcast_shape(a: Tensor, b: Tensor, op: str):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError as exc:
        raise DimensionError(f"{op}: cannot broadcast {a.shape} with {b.shape}") from exc


def _unbroadcast(grad: np.ndarray, shape) -> np.ndarray:
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad.reshape(shape)


def _expand(grad: np.ndarray, axis, keepdims: bool) -> np.ndarray:
    if axis is None or keepdims:
        return grad
    return np.expand_dims(grad, axis)


# ==============================================
# Elementwise arithmetic
# ==============================================

def add(a: TensorLike, b: TensorLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape(a, b, 'add')
    return record(
        a.values + b.values, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
    )


def subtract(a: TensorLike, b: TensorLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape(a, b, 'subtract')
    return record(
        a.values - b.values, (a, b),
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
    )


def multiply(a: TensorLike, b: TensorLike) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape(a, b, 'multiply')
    return record(
        a.values * b.values, (a, b),
        lambda g: (_unbroadcast(g * b.values, a.shape), _unbroadcast(g * a.values, b.shape)),
    )


def scale(a: TensorLike, factor: float) -> Tensor:
    a = as_tensor(a)
    factor = float(factor)
    return record(a.values * factor, (a,), lambda g: (g * factor,))


def negate(a: TensorLike) -> Tensor:
    a = as_tensor(a)
    return record(-a.values, (a,), lambda g: (-g,))


def relu(a: TensorLike) -> Tensor:
    a = as_tensor(a)
    active = a.values > 0
    return record(np.where(active, a.values, 0.0), (a,), lambda g: (g * active,))


def exp(a: TensorLike) -> Tensor:
    a = as_tensor(a)
    out = np.exp(a.values)
    return record(out, (a,), lambda g: (g * out,))


def log(a: TensorLike) -> Tensor:
    a = as_tensor(a)
    return record(np.log(a.values), (a,), lambda g: (g / a.values,))


# ==============================================
# Linear algebra
# ==============================================

def matmul(a: TensorLike, b: TensorLike) -> Tensor:
    """Matrix product of an m×k and a k×n tensor."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(f"matmul expects 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul inner dimensions differ: {a.shape} · {b.shape}")
    return record(
        a.values @ b.values, (a, b),
        lambda g: (g @ b.values.T, a.values.T @ g),
    )


def transpose(a: TensorLike) -> Tensor:
    a = as_tensor(a)
    if a.ndim != 2:
        raise DimensionError(f"transpose expects a 2-D tensor, got {a.shape}")
    return record(a.values.T, (a,), lambda g: (g.T,))


# ==============================================
# Reductions and indexing
# ==============================================

def reduce_sum(a: TensorLike, axis: Optional[int] = None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    out = a.values.sum(axis=axis, keepdims=keepdims)
    return record(
        out, (a,),
        lambda g: (np.broadcast_to(_expand(g, axis, keepdims), a.shape).copy(),),
    )


def mean(a: TensorLike, axis: Optional[int] = None) -> Tensor:
    a = as_tensor(a)
    count = a.values.size if axis is None else a.shape[axis]
    if count == 0:
        raise EmptyReductionError("mean over an empty axis")
    return scale(reduce_sum(a, axis=axis), 1.0 / count)


def gather(a: TensorLike, rows: np.ndarray, cols: np.ndarray) -> Tensor:
    """Pick ``a[rows[i], cols[i]]`` for every i."""
    a = as_tensor(a)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)

    def backward(g):
        grad = np.zeros_like(a.values)
        np.add.at(grad, (rows, cols), g)
        return (grad,)

    return record(a.values[rows, cols], (a,), backward)


# ==============================================
# Normalization and similarity
# ==============================================

def l2_normalize(v: TensorLike, axis: int = -1) -> Tensor:
    """Scale ``v`` (or each slice along ``axis``) to unit L2 norm."""
    v = as_tensor(v)
    norms = np.sqrt(np.sum(v.values * v.values, axis=axis, keepdims=True))
    if np.any(norms <= NORM_EPS):
        raise DegenerateInputError(
            f"Cannot normalize: norm {float(norms.min()):.3e} is below {NORM_EPS:g}"
        )
    out = v.values / norms

    def backward(g):
        radial = np.sum(g * out, axis=axis, keepdims=True)
        return ((g - out * radial) / norms,)

    return record(out, (v,), backward)


def cosine_sim(a: TensorLike, b: TensorLike) -> Tensor:
    """dot(a, b) / (‖a‖‖b‖) for two vectors of equal length."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 1 or a.shape != b.shape:
        raise DimensionError(f"cosine_sim expects equal-length vectors, got {a.shape} and {b.shape}")
    norm_a = float(np.sqrt(np.dot(a.values, a.values)))
    norm_b = float(np.sqrt(np.dot(b.values, b.values)))
    if norm_a <= NORM_EPS or norm_b <= NORM_EPS:
        raise DegenerateInputError("cosine_sim of a zero vector")
    denom = norm_a * norm_b
    cos = float(np.dot(a.values, b.values)) / denom

    def backward(g):
        return (
            g * (b.values / denom - cos * a.values / (norm_a * norm_a)),
            g * (a.values / denom - cos * b.values / (norm_b * norm_b)),
        )

    return record(np.clip(cos, -1.0, 1.0), (a, b), backward)


# ==============================================
# Log-sum-exp family
# ==============================================

def log_sum_exp(xs: TensorLike) -> Tensor:
    """Stable log Σ exp(x) over a 1-D input."""
    xs = as_tensor(xs)
    if xs.values.size == 0:
        raise EmptyReductionError("log_sum_exp of an empty list")
    flat = xs.values.reshape(-1)
    peak = flat.max()
    total = np.sum(np.exp(flat - peak))
    out = peak + np.log(total)

    def backward(g):
        return ((g * np.exp(xs.values - out)),)

    return record(out, (xs,), backward)


def masked_log_sum_exp(a: TensorLike, mask: np.ndarray, axis: int = -1, keepdims: bool = False) -> Tensor:
    """
    log Σ exp over the entries of ``a`` where ``mask`` is True, along ``axis``.

    Slices with no selected entry evaluate to 0 with zero gradient; callers
    decide whether such slices contribute.
    """
    a = as_tensor(a)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != a.shape:
        raise DimensionError(f"mask shape {mask.shape} does not match tensor shape {a.shape}")

    empty = ~mask.any(axis=axis, keepdims=True)
    peak = np.where(mask, a.values, -np.inf).max(axis=axis, keepdims=True)
    peak = np.where(empty, 0.0, peak)
    weights = np.exp(np.where(mask, a.values - peak, -np.inf))
    total = weights.sum(axis=axis, keepdims=True)
    total = np.where(empty, 1.0, total)
    out = peak + np.log(total)
    probs = weights / total

    def backward(g):
        return (_expand(g, axis, keepdims) * probs,)

    if not keepdims:
        out = np.squeeze(out, axis=axis)
    return record(out, (a,), backward)


def softmax_cross_entropy(logits: TensorLike, labels) -> Tensor:
    """
    −log softmax(logits)[label].

    A 1-D logits vector with an integer label gives that sample's loss; a B×C
    matrix with B labels gives the mean over rows.
    """
    logits = as_tensor(logits)
    single = logits.ndim == 1
    values = logits.values.reshape(1, -1) if single else logits.values
    if values.ndim != 2:
        raise DimensionError(f"softmax_cross_entropy expects 1-D or 2-D logits, got {logits.shape}")
    labels = np.atleast_1d(np.asarray(labels, dtype=np.int64))
    n_rows, n_classes = values.shape
    if labels.shape != (n_rows,):
        raise DimensionError(f"expected {n_rows} labels, got shape {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise LabelRangeError(f"labels must lie in [0, {n_classes})")

    rows = np.arange(n_rows)
    shifted = values - values.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.sum(np.exp(shifted), axis=1, keepdims=True))
    out = -np.mean(log_probs[rows, labels])

    def backward(g):
        grad = np.exp(log_probs)
        grad[rows, labels] -= 1.0
        grad *= g / n_rows
        return (grad.reshape(logits.shape),)

    return record(out, (logits,), backward)
