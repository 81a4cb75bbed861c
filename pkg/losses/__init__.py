"""
Contrastive losses and the combined local objective.
"""

from .contrastive import supcon_loss, supcon_decomposed, decoupled_sample_loss, decoupled_prototype_loss
from .objective import combined_objective

__all__ = [
    'supcon_loss',
    'supcon_decomposed',
    'decoupled_sample_loss',
    'decoupled_prototype_loss',
    'combined_objective',
]
