"""
Local client objective: cross-entropy plus μ times a contrastive regularizer.
"""

from numerics import ops
from numerics.tensor import Tensor, as_tensor


def combined_objective(ce, regularizer, mu: float) -> Tensor:
    """L = L_CE + μ·L_reg; with μ = 0 the regularizer is not evaluated into the graph."""
    mu = float(mu)
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    ce = as_tensor(ce)
    if mu == 0.0:
        return ce
    return ops.add(ce, ops.scale(regularizer, mu))
