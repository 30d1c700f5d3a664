import warnings

import numpy as np
import pytest

from tsdbscan import (
    ProbeResult,
    RunStats,
    SearchBounds,
    TuneConfig,
    cond,
    count_clusters,
    dbscan,
    effective_k,
    estimate_lower_bound,
    estimate_upper_bound,
    noise_fraction,
    sweep_curve,
    ternary_search,
    ts_clustering,
    tse_estimate,
)

TWO_CLUSTERS_1D = np.array([0.0, 0.1, 0.2, 10.0, 10.1, 10.2])[:, None]


def sweep_max_k(x, min_pts, lo, hi, n=1000):
    curve = sweep_curve(x, np.linspace(lo, hi, n), min_pts)
    return max(c.k for c in curve)


class TestEffectiveK:
    def test_chance_single_cluster(self):
        assert effective_k(ProbeResult(1.0, 1, 0.98), 0.9) == 0

    def test_converged_single_cluster(self):
        assert effective_k(ProbeResult(1.0, 1, 0.05), 0.9) == 1

    def test_rule_only_at_k_one(self):
        assert effective_k(ProbeResult(1.0, 7, 0.95), 0.9) == 7


class TestCond:
    B = SearchBounds(0.0, 9.0)

    @pytest.mark.parametrize("k_l,k_r,expect", [
        (1, 1, (0.0, 3.0)),
        (0, 1, (3.0, 6.0)),
        (0, 0, (6.0, 9.0)),
        (5, 2, (0.0, 6.0)),
        (2, 5, (3.0, 9.0)),
    ])
    def test_branches(self, k_l, k_r, expect):
        out = cond(self.B, 3.0, 6.0, k_l, k_r)
        assert (out.lower, out.upper) == expect

    def test_reduction_is_third_or_two_thirds_subset(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            lo = float(rng.uniform(0, 5))
            hi = lo + float(rng.uniform(0.1, 10))
            b = SearchBounds(lo, hi)
            m_l = (2 * lo + hi) / 3
            m_r = (lo + 2 * hi) / 3
            out = cond(b, m_l, m_r, int(rng.integers(0, 6)), int(rng.integers(0, 6)))
            assert out.lower >= lo - 1e-12 and out.upper <= hi + 1e-12
            ratio = out.width / b.width
            assert ratio == pytest.approx(1 / 3) or ratio == pytest.approx(2 / 3)


class TestTernarySearch:
    def test_finds_two_cluster_mode(self):
        cfg = TuneConfig(min_pts=2, itr=6)
        eps = ternary_search(TWO_CLUSTERS_1D, SearchBounds(0.0, 40.0), cfg)
        assert 0.0 < eps < 40.0
        k = count_clusters(dbscan(TWO_CLUSTERS_1D, eps, 2))
        assert k == sweep_max_k(TWO_CLUSTERS_1D, 2, 0.01, 40.0) == 2

    def test_degenerate_interval_returns_midpoint(self):
        a = 2.0
        b = float(np.nextafter(a, np.inf))
        with pytest.warns(UserWarning):
            out = ternary_search(TWO_CLUSTERS_1D, SearchBounds(a, b),
                                 TuneConfig(min_pts=2))
        assert out == pytest.approx(0.5 * (a + b))

    def test_result_within_initial_bounds_and_budget(self):
        rng = np.random.default_rng(1)
        x = rng.random((40, 2))
        cfg = TuneConfig(min_pts=3, itr=5)
        stats = RunStats()
        eps = ternary_search(x, SearchBounds(0.0, 3.0), cfg, stats)
        assert 0.0 <= eps <= 3.0
        assert stats.dbscan_invocations == 2 * cfg.itr

    def test_interval_shrink_rate(self):
        # cond keeps at most 2/3 per iteration; final midpoint must sit
        # inside the worst-case residual interval around some point
        cfg = TuneConfig(min_pts=2, itr=8)
        b = SearchBounds(0.0, 40.0)
        eps1 = ternary_search(TWO_CLUSTERS_1D, b, cfg)
        cfg2 = TuneConfig(min_pts=2, itr=12)
        eps2 = ternary_search(TWO_CLUSTERS_1D, b, cfg2)
        k1 = count_clusters(dbscan(TWO_CLUSTERS_1D, eps1, 2))
        k2 = count_clusters(dbscan(TWO_CLUSTERS_1D, eps2, 2))
        assert k1 == k2 == 2

    def test_exactly_unimodal_curve_reaches_sweep_max(self):
        # evenly spaced points within each group keep k(eps) an exact
        # staircase: 0 below the spacing, 3 until groups merge, then 2, 1
        base = np.arange(30) * 0.01
        x = np.concatenate([base, base + 5, base + 11])[:, None]
        cfg = TuneConfig(min_pts=3, itr=10)
        eps = ternary_search(x, SearchBounds(0.0, 30.0), cfg)
        assert count_clusters(dbscan(x, eps, 3)) == sweep_max_k(x, 3, 0.005, 30.0) == 3


class TestBoundEstimators:
    def test_alpha_one_upper_reduces_to_full_search(self):
        cfg = TuneConfig(min_pts=2, alpha=1.0, seed=3)
        ub0 = 40.0
        got = estimate_upper_bound(TWO_CLUSTERS_1D, cfg, ub0=ub0)
        want = ternary_search(TWO_CLUSTERS_1D, SearchBounds(0.0, ub0), cfg)
        assert got == want

    def test_alpha_one_lower_reduces_to_full_search(self):
        cfg = TuneConfig(min_pts=2, alpha=1.0, seed=3)
        got = estimate_lower_bound(TWO_CLUSTERS_1D, 5.0, cfg)
        want = ternary_search(TWO_CLUSTERS_1D, SearchBounds(0.0, 5.0), cfg)
        assert got == want

    def test_one_dimension_projection_is_identity(self):
        cfg = TuneConfig(min_pts=2, alpha=0.3, seed=4)
        got = estimate_lower_bound(TWO_CLUSTERS_1D, 5.0, cfg)
        want = ternary_search(TWO_CLUSTERS_1D, SearchBounds(0.0, 5.0), cfg)
        assert got == want

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(5)
        x = rng.random((60, 4))
        cfg = TuneConfig(min_pts=3, seed=11)
        assert estimate_upper_bound(x, cfg) == estimate_upper_bound(x, cfg)
        assert estimate_lower_bound(x, 1.0, cfg) == estimate_lower_bound(x, 1.0, cfg)

    def test_subsample_too_small_raises(self):
        x = np.random.default_rng(6).random((10, 2))
        with pytest.raises(ValueError):
            estimate_upper_bound(x, TuneConfig(min_pts=5, alpha=0.2))


class TestTsClustering:
    def test_two_cluster_dataset(self):
        cfg = TuneConfig(min_pts=2, alpha=0.5, seed=0)
        eps, lab = ts_clustering(TWO_CLUSTERS_1D, cfg)
        assert count_clusters(lab) == 2
        assert noise_fraction(lab) == 0.0

    def test_invocation_budget(self):
        rng = np.random.default_rng(7)
        x = rng.random((100, 3))
        cfg = TuneConfig(min_pts=3, itr=4, seed=1)
        stats = RunStats()
        ts_clustering(x, cfg, stats)
        assert stats.dbscan_invocations == 6 * cfg.itr

    def test_all_identical_points_warns(self):
        x = np.ones((10, 2))
        with pytest.warns(UserWarning):
            eps, lab = ts_clustering(x, TuneConfig(min_pts=2, seed=2))
        assert eps > 0

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        x = rng.random((80, 4))
        cfg = TuneConfig(min_pts=3, seed=9)
        e1, l1 = ts_clustering(x, cfg)
        e2, l2 = ts_clustering(x, cfg)
        assert e1 == e2
        assert np.array_equal(l1.labels, l2.labels)


class TestTse:
    def test_degenerate_sampling_equals_full_search(self):
        cfg = TuneConfig(min_pts=2, alpha=1.0, m=1, seed=0)
        b = SearchBounds(0.0, 40.0)
        assert tse_estimate(TWO_CLUSTERS_1D, b, cfg) == ternary_search(TWO_CLUSTERS_1D, b, cfg)

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(9)
        x = rng.random((60, 5))
        cfg = TuneConfig(min_pts=3, m=4, seed=13)
        b = SearchBounds(0.0, 2.0)
        assert tse_estimate(x, b, cfg) == tse_estimate(x, b, cfg)

    def test_invocation_budget(self):
        rng = np.random.default_rng(10)
        x = rng.random((60, 5))
        cfg = TuneConfig(min_pts=3, itr=3, m=5, seed=0)
        stats = RunStats()
        tse_estimate(x, SearchBounds(0.0, 2.0), cfg, stats)
        assert stats.dbscan_invocations == 2 * cfg.itr * cfg.m


class TestConfigValidation:
    @pytest.mark.parametrize("kwargs", [
        {"min_pts": 1},
        {"min_pts": 2, "itr": 0},
        {"min_pts": 2, "alpha": 0.0},
        {"min_pts": 2, "alpha": 1.5},
        {"min_pts": 2, "m": 0},
        {"min_pts": 2, "chance_noise_threshold": 1.0},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            TuneConfig(**kwargs)

    def test_bounds_reject_inverted(self):
        with pytest.raises(ValueError):
            SearchBounds(2.0, 1.0)
        with pytest.raises(ValueError):
            SearchBounds(-0.5, 1.0)
