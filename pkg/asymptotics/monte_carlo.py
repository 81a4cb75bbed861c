"""
Monte-Carlo estimates of the finite-M contrastive loss and its M → ∞ limit.

For a fixed encoder f and temperature τ, one trial evaluates

    −f(x)ᵀf(y)/τ + log (1/M) Σ_j exp(f(x_j⁻)ᵀf(x)/τ)

with (x, y) a positive pair and x_j⁻ drawn from the data distribution. The
limit replaces the inner average by a large independent sample. Trials are
processed in fixed-size chunks, each with its own random stream, and reduced
in chunk order, so results do not depend on the worker count.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from silantui import ModernLogger

from executors.client_executor import ClientExecutor
from models.experiment import AsymptoticsConfig
from models.records import AsymptoticsReport
from utils.seeding import derive_rng
from .sphere import Encoder, SphereDistribution, identity_encoder

TRIALS_PER_CHUNK = 250
DEFAULT_LIMIT_OUTER = 100_000
DEFAULT_LIMIT_INNER = 10_000


def log_mean_exp(values: np.ndarray) -> float:
    peak = float(np.max(values))
    return peak + float(np.log(np.sum(np.exp(values - peak)))) - float(np.log(values.size))


def contrastive_terms(fx: np.ndarray, fy: np.ndarray, fneg: np.ndarray, tau: float) -> float:
    """One trial: −f(x)ᵀf(y)/τ + log mean_j exp(f(x_j⁻)ᵀf(x)/τ)."""
    return -float(np.dot(fx, fy)) / tau + log_mean_exp(fneg @ fx / tau)


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    per_trial: np.ndarray


def _estimate(per_trial: np.ndarray) -> MonteCarloEstimate:
    stderr = float(per_trial.std(ddof=1) / np.sqrt(per_trial.size)) if per_trial.size > 1 else float('nan')
    return MonteCarloEstimate(float(per_trial.mean()), stderr, per_trial)


def _chunks(trials: int) -> List[Tuple[int, int, int]]:
    return [(c, start, min(start + TRIALS_PER_CHUNK, trials))
            for c, start in enumerate(range(0, trials, TRIALS_PER_CHUNK))]


class ConvergenceRunner(ModernLogger):
    """Chunked, optionally threaded evaluation of the Monte-Carlo estimators."""

    def __init__(self, encoder: Encoder = identity_encoder, distribution: Optional[SphereDistribution] = None,
                 tau: float = 0.5, seed: int = 0, workers: int = 1):
        super().__init__("ConvergenceRunner")
        if not tau > 0:
            raise ValueError(f"tau must be positive, got {tau}")
        self.encoder = encoder
        self.distribution = distribution or SphereDistribution()
        self.tau = float(tau)
        self.seed = seed
        self.workers = workers

    def anchors(self, trials: int) -> Tuple[np.ndarray, np.ndarray]:
        """Encoded positive pairs shared by every estimate of this runner."""
        x, y = self.distribution.sample_pairs(derive_rng(self.seed, "anchors"), trials)
        return self.encoder(x), self.encoder(y)

    def _log_mean_terms(self, fx: np.ndarray, n_negatives: int, stream: str) -> np.ndarray:
        """Per-anchor log mean exp over ``n_negatives`` fresh negatives."""

        def chunk(chunk_bounds: Tuple[int, int, int]) -> np.ndarray:
            index, start, stop = chunk_bounds
            rng = derive_rng(self.seed, stream, n_negatives, index)
            out = np.empty(stop - start)
            for i, anchor in enumerate(fx[start:stop]):
                negatives = self.encoder(self.distribution.sample(rng, n_negatives))
                out[i] = log_mean_exp(negatives @ anchor / self.tau)
            return out

        with ClientExecutor(self.workers) as executor:
            parts = executor.map(chunk, _chunks(fx.shape[0]))
        return np.concatenate(parts)

    def alignment(self, fx: np.ndarray, fy: np.ndarray) -> np.ndarray:
        return -np.sum(fx * fy, axis=1) / self.tau

    def empirical(self, m: int, trials: int) -> MonteCarloEstimate:
        if m < 1 or trials < 1:
            raise ValueError("M and trials must be >= 1")
        fx, fy = self.anchors(trials)
        return _estimate(self.alignment(fx, fy) + self._log_mean_terms(fx, m, "negatives"))

    def limit(self, trials: int, inner_samples: int) -> MonteCarloEstimate:
        if trials < 1 or inner_samples < 1:
            raise ValueError("trials and inner_samples must be >= 1")
        fx, fy = self.anchors(trials)
        return _estimate(self.alignment(fx, fy) + self._log_mean_terms(fx, inner_samples, "inner"))

    def experiment(self, m_grid: Sequence[int], trials: int, inner_samples: int) -> AsymptoticsReport:
        """
        Empirical loss at every M against one limit estimate. Both use the same
        anchors and positives, so the alignment term cancels in the gap and only
        the negative-sample average contributes noise.
        """
        m_grid = tuple(int(m) for m in m_grid)
        if not m_grid:
            raise ValueError("m_grid must not be empty")
        fx, fy = self.anchors(trials)
        alignment = self.alignment(fx, fy)
        self.info(f"[ConvergenceRunner] Limit estimate: {trials} trials × {inner_samples} inner samples")
        limit_terms = self._log_mean_terms(fx, inner_samples, "inner")
        limit = _estimate(alignment + limit_terms)

        empirical, gaps, gap_stderr = [], [], []
        for m in m_grid:
            self.info(f"[ConvergenceRunner] M={m}: {trials} trials")
            terms = self._log_mean_terms(fx, m, "negatives")
            empirical.append(float(np.mean(alignment + terms)))
            difference = _estimate(terms - limit_terms)
            gaps.append(abs(difference.mean))
            gap_stderr.append(difference.stderr)

        bound = tuple(finite_sample_bound(m, self.tau) for m in m_grid)
        slope, _ = fit_loglog_slope(m_grid, gaps)
        return AsymptoticsReport(
            tau=self.tau,
            m_grid=m_grid,
            empirical_loss=tuple(empirical),
            limit_estimate=limit.mean,
            abs_gap=tuple(gaps),
            bound=bound,
            trials=trials,
            gap_stderr=tuple(gap_stderr),
            limit_stderr=limit.stderr,
            slope=slope,
            fitted_constant=gaps[-1] * np.sqrt(m_grid[-1]),
            dim=self.distribution.dim,
            kappa=self.distribution.kappa,
            seed=self.seed,
        )


def finite_sample_bound(m: int, tau: float) -> float:
    """Leading term e^{2/τ}/M of the finite-M error bound."""
    return float(np.exp(2.0 / tau) / m)


def fit_loglog_slope(m_grid: Sequence[int], gaps: Sequence[float]) -> Tuple[float, float]:
    """Least-squares (slope, intercept) of log gap against log M; NaN when fewer than two positive gaps."""
    m = np.asarray(m_grid, dtype=np.float64)
    g = np.asarray(gaps, dtype=np.float64)
    keep = g > 0
    if keep.sum() < 2:
        return float('nan'), float('nan')
    slope, intercept = np.polyfit(np.log(m[keep]), np.log(g[keep]), 1)
    return float(slope), float(intercept)


def empirical_contrastive(f: Encoder, dist: SphereDistribution, tau: float, m: int, trials: int,
                          seed: int, workers: int = 1) -> float:
    """Monte-Carlo mean of the M-negative contrastive loss minus log M."""
    return ConvergenceRunner(f, dist, tau, seed, workers).empirical(m, trials).mean


def limit_estimate(f: Encoder, dist: SphereDistribution, tau: float, trials: int = DEFAULT_LIMIT_OUTER,
                   seed: int = 0, inner_samples: int = DEFAULT_LIMIT_INNER, workers: int = 1) -> float:
    """Nested Monte-Carlo estimate of −E[f(x)ᵀf(y)]/τ + E_x log E_{x⁻} exp(f(x⁻)ᵀf(x)/τ)."""
    return ConvergenceRunner(f, dist, tau, seed, workers).limit(trials, inner_samples).mean


def convergence_experiment(cfg: AsymptoticsConfig, seed: int, encoder: Encoder = identity_encoder,
                           workers: int = 1) -> AsymptoticsReport:
    runner = ConvergenceRunner(encoder, SphereDistribution(cfg.dim, cfg.kappa), cfg.tau, seed, workers)
    return runner.experiment(cfg.m_grid, cfg.trials, cfg.inner_samples)
