"""
Label-skew statistics of a partition plan.
"""

import numpy as np

from models.partition_plan import PartitionPlan


def class_histograms(plan: PartitionPlan, labels, n_classes: int) -> np.ndarray:
    """n_clients × n_classes matrix of per-client label counts."""
    labels = np.asarray(labels, dtype=np.int64)
    return np.stack([np.bincount(labels[a], minlength=n_classes) for a in plan.assignments])


def total_variation_from_global(plan: PartitionPlan, labels, n_classes: int) -> np.ndarray:
    """Per-client total-variation distance between its label distribution and the global one."""
    labels = np.asarray(labels, dtype=np.int64)
    global_dist = np.bincount(labels, minlength=n_classes) / labels.size
    histograms = class_histograms(plan, labels, n_classes).astype(np.float64)
    sizes = histograms.sum(axis=1, keepdims=True)
    local = np.divide(histograms, sizes, out=np.zeros_like(histograms), where=sizes > 0)
    return 0.5 * np.abs(local - global_dist).sum(axis=1)


def mean_label_skew(plan: PartitionPlan, labels, n_classes: int) -> float:
    return float(total_variation_from_global(plan, labels, n_classes).mean())
