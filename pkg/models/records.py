"""
Result records: per-round training log, similarity histograms and the
asymptotics report.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

ROUND_CSV_HEADER = ('round', 'clients', 'train_loss', 'test_acc', 'ema_acc', 'align_metric', 'uniform_metric')


@dataclass(frozen=True)
class RoundRecord:
    """One communication round as logged to the round CSV."""

    round: int
    client_ids: Tuple[int, ...]
    train_loss: float
    test_acc: float
    ema_acc: float
    align_metric: float
    uniform_metric: float

    def csv_row(self) -> List[str]:
        return [
            str(self.round),
            ';'.join(str(c) for c in self.client_ids),
            repr(float(self.train_loss)),
            repr(float(self.test_acc)),
            repr(float(self.ema_acc)),
            repr(float(self.align_metric)),
            repr(float(self.uniform_metric)),
        ]

    @classmethod
    def from_csv_row(cls, row: Dict[str, str]) -> 'RoundRecord':
        clients = tuple(int(c) for c in row['clients'].split(';') if c)
        return cls(
            round=int(row['round']),
            client_ids=clients,
            train_loss=float(row['train_loss']),
            test_acc=float(row['test_acc']),
            ema_acc=float(row['ema_acc']),
            align_metric=float(row['align_metric']),
            uniform_metric=float(row['uniform_metric']),
        )

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite([
            self.train_loss, self.test_acc, self.ema_acc, self.align_metric, self.uniform_metric,
        ])))


@dataclass(frozen=True, eq=False)
class SimilarityHistogram:
    """Intra- and inter-class cosine-similarity counts over 40 bins on [−1, 1]."""

    bin_edges: np.ndarray
    intra_counts: np.ndarray
    inter_counts: np.ndarray
    has_intra: bool = True
    has_inter: bool = True
    intra_mean: float = float('nan')
    inter_mean: float = float('nan')

    @property
    def n_bins(self) -> int:
        return int(self.bin_edges.size - 1)

    @property
    def mean_gap(self) -> float:
        """Mean intra-class minus mean inter-class similarity."""
        return float(self.intra_mean - self.inter_mean)

    def rows(self) -> List[Tuple[str, float, float, int]]:
        rows = []
        for category, counts in (('intra', self.intra_counts), ('inter', self.inter_counts)):
            for i in range(self.n_bins):
                rows.append((category, float(self.bin_edges[i]), float(self.bin_edges[i + 1]), int(counts[i])))
        return rows


@dataclass(frozen=True)
class AsymptoticsReport:
    """Empirical finite-M contrastive loss against its M → ∞ limit."""

    tau: float
    m_grid: Tuple[int, ...]
    empirical_loss: Tuple[float, ...]
    limit_estimate: float
    abs_gap: Tuple[float, ...]
    bound: Tuple[float, ...]
    trials: int
    gap_stderr: Tuple[float, ...] = ()
    limit_stderr: float = 0.0
    slope: float = float('nan')
    fitted_constant: float = float('nan')
    dim: int = 0
    kappa: float = 0.0
    seed: int = 0

    def __post_init__(self):
        grid = tuple(int(m) for m in self.m_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("m_grid must be strictly increasing")
        object.__setattr__(self, 'm_grid', grid)

    def rows(self) -> List[Tuple[int, float, float, float, float]]:
        return [
            (m, self.empirical_loss[i], self.limit_estimate, self.abs_gap[i], self.bound[i])
            for i, m in enumerate(self.m_grid)
        ]

    def gap_at(self, m: int) -> float:
        return self.abs_gap[self.m_grid.index(m)]

    def summary(self) -> Dict[str, Any]:
        return {
            'tau': self.tau,
            'dim': self.dim,
            'kappa': self.kappa,
            'trials': self.trials,
            'seed': self.seed,
            'm_grid': list(self.m_grid),
            'limit_estimate': self.limit_estimate,
            'limit_stderr': self.limit_stderr,
            'gap_stderr': list(self.gap_stderr),
            'slope': self.slope,
            'fitted_constant': self.fitted_constant,
        }
