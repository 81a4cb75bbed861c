"""
Dense float64 numerics with reverse-mode differentiation.
"""

from .tensor import Tensor, GradientTape, as_tensor
from .ops import (
    NORM_EPS,
    add,
    subtract,
    multiply,
    scale,
    negate,
    relu,
    exp,
    log,
    matmul,
    transpose,
    reduce_sum,
    mean,
    gather,
    l2_normalize,
    cosine_sim,
    log_sum_exp,
    masked_log_sum_exp,
    softmax_cross_entropy,
)
from .parameters import ParameterVector, sgd_step, finite_diff_gradient
from .model import MLPArchitecture, MLPModel, ModelOutput

__all__ = [
    'Tensor',
    'GradientTape',
    'as_tensor',
    'NORM_EPS',
    'add',
    'subtract',
    'multiply',
    'scale',
    'negate',
    'relu',
    'exp',
    'log',
    'matmul',
    'transpose',
    'reduce_sum',
    'mean',
    'gather',
    'l2_normalize',
    'cosine_sim',
    'log_sum_exp',
    'masked_log_sum_exp',
    'softmax_cross_entropy',
    'ParameterVector',
    'sgd_step',
    'finite_diff_gradient',
    'MLPArchitecture',
    'MLPModel',
    'ModelOutput',
]
