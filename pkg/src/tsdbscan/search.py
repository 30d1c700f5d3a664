"""Ternary-search tuning of the DBSCAN radius.

The cluster count k(eps) is near-unimodal: it rises from 0 (everything
noise) to a mode and falls back to 1 (one merged cluster). Ternary
search exploits this to locate argmax k(eps) with two DBSCAN probes per
iteration, after sampling-based bounds shrink the initial interval.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    Labeling,
    RunStats,
    approximate_diameter_ub,
    count_clusters,
    dbscan,
    noise_fraction,
    validate_points,
)

# sub-seed tags keeping the row, dimension, and repeat RNG streams apart
_SEED_ROWS = 1
_SEED_DIMS = 2
_SEED_REPEAT = 3


@dataclass
class SearchBounds:
    """Interval the search contracts around the mode of k(eps)."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0 <= self.lower < self.upper):
            raise ValueError(f"need 0 <= lower < upper, got [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass
class TuneConfig:
    """Every knob of the tuning pipeline."""

    min_pts: int
    itr: int = 6
    alpha: float = 0.2
    m: int = 30
    seed: int = 0
    metric: str = "euclidean"
    chance_noise_threshold: float = 0.9

    def __post_init__(self):
        if self.min_pts < 2:
            raise ValueError("min_pts must be at least 2")
        if self.itr < 1:
            raise ValueError("itr must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if self.m < 1:
            raise ValueError("m must be positive")
        if not 0 < self.chance_noise_threshold < 1:
            raise ValueError("chance_noise_threshold must be in (0, 1)")


@dataclass
class ProbeResult:
    """One k(eps) evaluation."""

    epsilon: float
    k: int
    noise: float


def effective_k(probe: ProbeResult, chance_noise_threshold: float) -> int:
    """Cluster count with the chance-single-cluster guard.

    A lone cluster that leaves almost every point as noise formed by
    chance, not by convergence; treat it as the under-eps regime (k=0)
    so the search keeps moving right.
    """
    if probe.k == 1 and probe.noise > chance_noise_threshold:
        return 0
    return probe.k


def cond(bounds: SearchBounds, m_l: float, m_r: float, k_l: int, k_r: int) -> SearchBounds:
    """Interval-reduction rule; keeps the mode, drops 1/3 or 2/3."""
    if k_l == 1 and k_r == 1:
        return SearchBounds(bounds.lower, m_l)
    if k_l == 0 and k_r == 1:
        return SearchBounds(m_l, m_r)
    if k_l == 0 and k_r == 0:
        return SearchBounds(m_r, bounds.upper)
    if k_l > k_r:
        return SearchBounds(bounds.lower, m_r)
    return SearchBounds(m_l, bounds.upper)


def _probe(x: np.ndarray, epsilon: float, cfg: TuneConfig, stats: RunStats | None) -> ProbeResult:
    labeling = dbscan(x, epsilon, cfg.min_pts, metric=cfg.metric, stats=stats)
    return ProbeResult(epsilon=epsilon, k=count_clusters(labeling), noise=noise_fraction(labeling))


def ternary_search(x, bounds: SearchBounds, cfg: TuneConfig,
                   stats: RunStats | None = None) -> float:
    """Contract ``bounds`` for ``cfg.itr`` iterations; return the final midpoint.

    Exactly 2*itr DBSCAN probes. The result lies inside the initial bounds.
    """
    x = validate_points(x)
    if bounds.width <= np.finfo(np.float64).eps * max(1.0, abs(bounds.upper)):
        warnings.warn("degenerate search interval; returning its midpoint")
        return 0.5 * (bounds.lower + bounds.upper)
    m_l = m_r = 0.5 * (bounds.lower + bounds.upper)
    for _ in range(cfg.itr):
        m_l = (2 * bounds.lower + bounds.upper) / 3
        m_r = (bounds.lower + 2 * bounds.upper) / 3
        if m_l <= 0 or m_l >= m_r:  # interval collapsed to float resolution
            break
        k_l = effective_k(_probe(x, m_l, cfg, stats), cfg.chance_noise_threshold)
        k_r = effective_k(_probe(x, m_r, cfg, stats), cfg.chance_noise_threshold)
        bounds = cond(bounds, m_l, m_r, k_l, k_r)
    return 0.5 * (m_l + m_r)


def _sample_rows(n: int, cfg: TuneConfig, rng: np.random.Generator) -> np.ndarray:
    size = math.ceil(cfg.alpha * n)
    return np.sort(rng.choice(n, size=size, replace=False))


def _sample_dims(d: int, cfg: TuneConfig, rng: np.random.Generator) -> np.ndarray:
    size = max(1, math.ceil(cfg.alpha * d))
    return np.sort(rng.choice(d, size=size, replace=False))


def estimate_upper_bound(x, cfg: TuneConfig, ub0: float | None = None,
                         stats: RunStats | None = None) -> float:
    """Heuristic upper bound for the mode of k(eps).

    A row subsample is sparser than the full data, so its best radius is
    larger; ternary search on the subsample over (0, UB0) yields an UB.
    """
    x = validate_points(x)
    n = len(x)
    if math.ceil(cfg.alpha * n) < cfg.min_pts + 1:
        raise ValueError(
            f"subsample of ceil({cfg.alpha} * {n}) points is too small for "
            f"min_pts={cfg.min_pts}; fall back to the trivial bound"
        )
    if ub0 is None:
        ub0 = approximate_diameter_ub(x, metric=cfg.metric)
    rng = np.random.default_rng([cfg.seed, _SEED_ROWS])
    sub = x[_sample_rows(n, cfg, rng)]
    return ternary_search(sub, SearchBounds(0.0, ub0), cfg, stats)


def estimate_lower_bound(x, ub: float, cfg: TuneConfig,
                         stats: RunStats | None = None) -> float:
    """Heuristic lower bound: project onto a dimension subsample.

    Dropping dimensions brings points closer, so the projected best
    radius is smaller; ternary search runs with (0, ub) as its interval.
    """
    x = validate_points(x)
    if ub <= 0:
        raise ValueError("ub must be positive")
    rng = np.random.default_rng([cfg.seed, _SEED_DIMS])
    proj = x[:, _sample_dims(x.shape[1], cfg, rng)]
    return ternary_search(proj, SearchBounds(0.0, ub), cfg, stats)


def _resolve_bounds(x: np.ndarray, cfg: TuneConfig, stats: RunStats | None) -> tuple[SearchBounds, float]:
    """Shared bound-estimation prologue; returns (bounds, ub0)."""
    ub0 = approximate_diameter_ub(x, metric=cfg.metric)
    if ub0 <= 0:
        warnings.warn("degenerate dataset: all points coincide with the first")
        ub0 = np.finfo(np.float64).eps
    try:
        ub = estimate_upper_bound(x, cfg, ub0=ub0, stats=stats)
    except ValueError:
        warnings.warn("subsample too small for the upper-bound heuristic; using the trivial bound")
        ub = ub0
    lb = estimate_lower_bound(x, ub, cfg, stats=stats)
    if lb >= ub:
        # sampling noise inverted the bounds: widen, clipped to (0, ub0)
        lb, ub = 0.5 * lb, min(2.0 * ub, ub0)
        if lb >= ub:
            lb, ub = 0.0, ub0
    return SearchBounds(lb, ub), ub0


def ts_clustering(x, cfg: TuneConfig, stats: RunStats | None = None) -> tuple[float, Labeling]:
    """Full pipeline: bounds, ternary search, final clustering.

    Three ternary searches (upper bound, lower bound, final) cost
    6*itr DBSCAN probes; the returned labeling is one extra run at the
    tuned radius.
    """
    x = validate_points(x)
    if len(x) < cfg.min_pts:
        raise ValueError(f"need at least min_pts={cfg.min_pts} points, got {len(x)}")
    bounds, _ = _resolve_bounds(x, cfg, stats)
    epsilon = ternary_search(x, bounds, cfg, stats)
    return epsilon, dbscan(x, epsilon, cfg.min_pts, metric=cfg.metric)


def tse_estimate(x, bounds: SearchBounds, cfg: TuneConfig,
                 stats: RunStats | None = None) -> float:
    """Averaged doubly-subsampled estimate of the best radius.

    Row sampling pushes the best radius up, dimension sampling pulls it
    down; sampling both at once roughly cancels, so the mean over
    ``cfg.m`` independent repeats estimates the full-data optimum at a
    fraction of the cost.
    """
    x = validate_points(x)
    estimates = np.empty(cfg.m)
    for r in range(cfg.m):
        rng = np.random.default_rng([cfg.seed, _SEED_REPEAT, r])
        rows = _sample_rows(len(x), cfg, rng)
        dims = _sample_dims(x.shape[1], cfg, rng)
        estimates[r] = ternary_search(x[np.ix_(rows, dims)], bounds, cfg, stats)
    return float(estimates.mean())


def tse_clustering(x, cfg: TuneConfig, stats: RunStats | None = None) -> tuple[float, Labeling]:
    """Like ts_clustering but with the subsampled estimator as the final stage."""
    x = validate_points(x)
    if len(x) < cfg.min_pts:
        raise ValueError(f"need at least min_pts={cfg.min_pts} points, got {len(x)}")
    bounds, _ = _resolve_bounds(x, cfg, stats)
    epsilon = tse_estimate(x, bounds, cfg, stats)
    return epsilon, dbscan(x, epsilon, cfg.min_pts, metric=cfg.metric)
