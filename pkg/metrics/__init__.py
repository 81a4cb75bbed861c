"""
Evaluation: accuracy tracking, representation geometry, similarity histograms.
"""

from .accuracy import accuracy, accuracy_from_logits, ema_update, AccuracyTracker, DEFAULT_EMA_BETA
from .representation import (
    alignment_metric, uniformity_metric, positive_pairs, representation_metrics, metric_sample_indices,
)
from .histogram import cosine_histogram, histogram_edges, N_BINS, DEFAULT_MAX_PAIRS

__all__ = [
    'accuracy',
    'accuracy_from_logits',
    'ema_update',
    'AccuracyTracker',
    'DEFAULT_EMA_BETA',
    'alignment_metric',
    'uniformity_metric',
    'positive_pairs',
    'representation_metrics',
    'metric_sample_indices',
    'cosine_histogram',
    'histogram_edges',
    'N_BINS',
    'DEFAULT_MAX_PAIRS',
]
