"""
Monte-Carlo check of the large-M behaviour of the contrastive loss.
"""

from .sphere import SphereDistribution, identity_encoder, constant_encoder
from .monte_carlo import (
    ConvergenceRunner,
    MonteCarloEstimate,
    contrastive_terms,
    log_mean_exp,
    empirical_contrastive,
    limit_estimate,
    convergence_experiment,
    finite_sample_bound,
    fit_loglog_slope,
)

__all__ = [
    'SphereDistribution',
    'identity_encoder',
    'constant_encoder',
    'ConvergenceRunner',
    'MonteCarloEstimate',
    'contrastive_terms',
    'log_mean_exp',
    'empirical_contrastive',
    'limit_estimate',
    'convergence_experiment',
    'finite_sample_bound',
    'fit_loglog_slope',
]
