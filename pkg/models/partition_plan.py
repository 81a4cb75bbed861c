"""
Client partition plans.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

IID_MARKER = 'iid'


@dataclass(frozen=True, eq=False)
class PartitionPlan:
    """
    Disjoint per-client sample index lists covering the whole dataset.
    alpha is the Dirichlet concentration, or None for the IID split.
    """

    assignments: List[np.ndarray]
    alpha: Optional[float]
    seed: int
    min_size: int = 1
    n_classes: Optional[int] = None
    class_histograms: List[List[int]] = field(default_factory=list)

    def __post_init__(self):
        frozen = []
        for indices in self.assignments:
            array = np.array(indices, dtype=np.int64).reshape(-1)
            array.setflags(write=False)
            frozen.append(array)
        object.__setattr__(self, 'assignments', frozen)

    @property
    def n_clients(self) -> int:
        return len(self.assignments)

    @property
    def is_iid(self) -> bool:
        return self.alpha is None

    @property
    def n_samples(self) -> int:
        return int(sum(a.size for a in self.assignments))

    def client_sizes(self) -> List[int]:
        return [int(a.size) for a in self.assignments]

    def is_disjoint_cover(self, n_samples: int) -> bool:
        if not self.assignments:
            return n_samples == 0
        merged = np.concatenate(self.assignments)
        return merged.size == n_samples and np.array_equal(np.sort(merged), np.arange(n_samples))

    def with_histograms(self, labels: np.ndarray, n_classes: int) -> 'PartitionPlan':
        labels = np.asarray(labels, dtype=np.int64)
        histograms = [np.bincount(labels[a], minlength=n_classes).tolist() for a in self.assignments]
        return PartitionPlan(self.assignments, self.alpha, self.seed, self.min_size, n_classes, histograms)

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            'alpha': IID_MARKER if self.alpha is None else float(self.alpha),
            'seed': int(self.seed),
            'min_size': int(self.min_size),
            'n_samples': self.n_samples,
            'assignments': {str(k): a.tolist() for k, a in enumerate(self.assignments)},
        }
        if self.n_classes is not None:
            result['n_classes'] = int(self.n_classes)
        if self.class_histograms:
            result['class_histograms'] = {str(k): list(h) for k, h in enumerate(self.class_histograms)}
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PartitionPlan':
        raw_alpha = data.get('alpha', IID_MARKER)
        alpha = None if raw_alpha == IID_MARKER else float(raw_alpha)
        assignments = data['assignments']
        ordered = [assignments[str(k)] for k in range(len(assignments))]
        histograms = data.get('class_histograms', {})
        return cls(
            assignments=ordered,
            alpha=alpha,
            seed=int(data['seed']),
            min_size=int(data.get('min_size', 1)),
            n_classes=data.get('n_classes'),
            class_histograms=[histograms[str(k)] for k in range(len(histograms))],
        )

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2)
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'PartitionPlan':
        with open(path, 'r', encoding='utf-8') as f:
            return cls.from_dict(json.load(f))

    def same_as(self, other: 'PartitionPlan') -> bool:
        return (
            self.alpha == other.alpha
            and self.seed == other.seed
            and self.n_clients == other.n_clients
            and all(np.array_equal(a, b) for a, b in zip(self.assignments, other.assignments))
        )
