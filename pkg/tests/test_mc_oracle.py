import numpy as np
import pytest
from scipy import stats

from mvequiv.errors import ValidationError
from mvequiv.estimation import estimate_frontier, sample_moments
from mvequiv.inference import power_lambda, prob_inefficient_m
from mvequiv.mc_oracle import (
    McConfig,
    empirical_power,
    empirical_prob_inefficient,
    frontier_pivot_checks,
    simulate_frontier_estimates,
    simulate_sample,
    simulate_test_statistics,
    synthesize_moments,
)
from mvequiv.moments import FrontierParams, frontier_params


@pytest.fixture(scope="module")
def truth():
    return synthesize_moments(FrontierParams(0.014, 0.0011, 0.25), k=5, seed=7)


class TestSynthesizeMoments:
    def test_roundtrip_exact(self):
        for s in (0.0, 0.05, 0.25, 1.25):
            f = FrontierParams(r_gmv=0.014, v_gmv=0.0011, s=s)
            g = frontier_params(synthesize_moments(f, k=5, seed=3))
            assert g.r_gmv == pytest.approx(f.r_gmv, abs=1e-14)
            assert g.v_gmv == pytest.approx(f.v_gmv, rel=1e-12)
            assert g.s == pytest.approx(f.s, rel=1e-10, abs=1e-14)

    def test_seed_changes_direction_not_frontier(self):
        f = FrontierParams(0.01, 0.002, 0.4)
        m1 = synthesize_moments(f, k=6, seed=1)
        m2 = synthesize_moments(f, k=6, seed=2)
        assert not np.allclose(m1.mu, m2.mu)
        g1, g2 = frontier_params(m1), frontier_params(m2)
        assert g1.s == pytest.approx(g2.s, rel=1e-10)

    def test_rejects_single_asset(self):
        with pytest.raises(ValidationError):
            synthesize_moments(FrontierParams(0.0, 1.0, 0.1), k=1, seed=0)


class TestSimulateSample:
    def test_shape_and_law(self, truth):
        rng = np.random.default_rng(99)
        sample = simulate_sample(truth, 50_000, rng)
        assert (sample.n, sample.k) == (50_000, 5)
        m = sample_moments(sample)
        np.testing.assert_allclose(m.mu, truth.mu, atol=5e-3)
        np.testing.assert_allclose(m.sigma, truth.sigma, atol=5e-4)


class TestSimulateFrontierEstimates:
    def test_deterministic_given_seed(self, truth):
        cfg = McConfig(n=60, k=5, reps=500, seed=11, truth=truth)
        first = simulate_frontier_estimates(cfg)
        second = simulate_frontier_estimates(cfg)
        for a, b in zip(first[:3], second[:3]):
            assert np.array_equal(a, b)
        assert first[3] == second[3] == 0

    def test_reps_prefix_stable(self, truth):
        # replication i depends only on (seed, i): a longer run extends the
        # shorter one bit for bit
        short = simulate_frontier_estimates(McConfig(60, 5, 100, 11, truth))
        long = simulate_frontier_estimates(McConfig(60, 5, 300, 11, truth))
        for a, b in zip(short[:3], long[:3]):
            assert np.array_equal(a, b[:100])

    def test_matches_direct_estimation(self, truth):
        cfg = McConfig(n=40, k=5, reps=3, seed=21, truth=truth)
        r, v, s, failures = simulate_frontier_estimates(cfg)
        assert failures == 0
        for i in range(3):
            rng = np.random.default_rng([21, i])
            ef = estimate_frontier(simulate_sample(truth, 40, rng))
            assert r[i] == pytest.approx(ef.r_hat, rel=1e-9)
            assert v[i] == pytest.approx(ef.v_hat, rel=1e-9)
            assert s[i] == pytest.approx(ef.s_hat, rel=1e-8, abs=1e-12)

    def test_single_replication(self, truth):
        r, v, s, failures = simulate_frontier_estimates(McConfig(20, 5, 1, 5, truth))
        assert r.shape == v.shape == s.shape == (1,)
        assert failures == 0
        assert v[0] > 0 and s[0] >= 0

    def test_config_validation(self, truth):
        with pytest.raises(ValidationError):
            McConfig(n=5, k=5, reps=10, seed=0, truth=truth)
        with pytest.raises(ValidationError):
            McConfig(n=60, k=5, reps=0, seed=0, truth=truth)


class TestEmpiricalProbabilities:
    def test_matches_quadrature_at_vertex_target(self, truth):
        f = frontier_params(truth)
        cfg = McConfig(n=60, k=5, reps=20_000, seed=31, truth=truth)
        mc = empirical_prob_inefficient(cfg, mu0=f.r_gmv)
        assert abs(mc.estimate - 0.5) < 3 * mc.std_error
        assert mc.failures == 0

    def test_matches_quadrature_off_vertex(self, truth):
        f = frontier_params(truth)
        mu0 = f.r_gmv + 0.2 * np.sqrt(f.v_gmv)
        analytic = prob_inefficient_m(f, 60, 5, mu0)
        cfg = McConfig(n=60, k=5, reps=20_000, seed=37, truth=truth)
        mc = empirical_prob_inefficient(cfg, mu0=mu0)
        assert abs(mc.estimate - analytic) < 3 * mc.std_error

    def test_alpha_tilde_route_agrees_with_mapped_target(self, truth):
        cfg = McConfig(n=60, k=5, reps=2_000, seed=41, truth=truth)
        at = 0.97
        via_qu = empirical_prob_inefficient(cfg, alpha_tilde=at)
        assert 0.0 <= via_qu.estimate <= 1.0
        assert via_qu.reps == 2_000

    def test_requires_exactly_one_problem(self, truth):
        cfg = McConfig(n=60, k=5, reps=10, seed=1, truth=truth)
        with pytest.raises(ValidationError):
            empirical_prob_inefficient(cfg)
        with pytest.raises(ValidationError):
            empirical_prob_inefficient(cfg, mu0=0.01, alpha_tilde=1.0)


class TestTestStatisticsAndPower:
    def test_null_size_matches_beta(self, truth):
        f = frontier_params(truth)
        # under the null the target sits exactly at the vertex return
        cfg = McConfig(n=60, k=5, reps=20_000, seed=43, truth=truth)
        mc = empirical_power(cfg, mu0=f.r_gmv, beta=0.05)
        assert abs(mc.estimate - 0.05) < 3 * mc.std_error

    def test_power_matches_quadrature(self, truth):
        f = frontier_params(truth)
        lam = 0.5
        mu0 = f.r_gmv + lam * np.sqrt(f.v_gmv)
        analytic = power_lambda(lam, f.s, 60, 5, 0.05)
        cfg = McConfig(n=60, k=5, reps=20_000, seed=47, truth=truth)
        mc = empirical_power(cfg, mu0=mu0, beta=0.05)
        assert abs(mc.estimate - analytic) < 3 * mc.std_error

    def test_statistics_centered_under_null(self, truth):
        f = frontier_params(truth)
        cfg = McConfig(n=60, k=5, reps=20_000, seed=53, truth=truth)
        draws = simulate_test_statistics(cfg, mu0=f.r_gmv)
        result = stats.kstest(draws, stats.t(55).cdf)
        assert result.pvalue > 0.01

    def test_rejects_bad_beta(self, truth):
        cfg = McConfig(n=60, k=5, reps=10, seed=1, truth=truth)
        with pytest.raises(ValidationError):
            empirical_power(cfg, mu0=0.01, beta=1.5)


class TestFrontierPivotLaws:
    def test_pivots_pass_ks_and_independence(self, truth):
        cfg = McConfig(n=60, k=5, reps=10_000, seed=61, truth=truth)
        rep = frontier_pivot_checks(cfg)
        assert rep.failures == 0
        assert rep.ks_v_pvalue > 0.01
        assert rep.ks_s_pvalue > 0.01
        assert rep.ks_r_pvalue > 0.01
        assert abs(rep.corr_v_r) < 0.03
        assert abs(rep.corr_v_s) < 0.03

    def test_zero_slope_gives_central_f(self):
        truth0 = synthesize_moments(FrontierParams(0.014, 0.0011, 0.0), k=5, seed=9)
        cfg = McConfig(n=60, k=5, reps=5_000, seed=67, truth=truth0)
        rep = frontier_pivot_checks(cfg)
        assert rep.ks_s_pvalue > 0.01

    def test_minimal_degrees_of_freedom(self):
        # n - k = 1: the variance pivot collapses to a single chi-square dof
        truth_edge = synthesize_moments(FrontierParams(0.0, 1.0, 0.1), k=5, seed=13)
        cfg = McConfig(n=6, k=5, reps=5_000, seed=71, truth=truth_edge)
        rep = frontier_pivot_checks(cfg)
        assert rep.ks_v_pvalue > 0.01

    def test_variance_independent_of_location_scale_pair(self, truth):
        # coarse binned independence check of (v_hat, r_hat)
        cfg = McConfig(n=60, k=5, reps=10_000, seed=73, truth=truth)
        r, v, _, _ = simulate_frontier_estimates(cfg)
        v_bins = np.quantile(v, [0.0, 0.25, 0.5, 0.75, 1.0])
        r_bins = np.quantile(r, [0.0, 0.25, 0.5, 0.75, 1.0])
        v_idx = np.clip(np.digitize(v, v_bins[1:-1]), 0, 3)
        r_idx = np.clip(np.digitize(r, r_bins[1:-1]), 0, 3)
        table = np.zeros((4, 4))
        np.add.at(table, (v_idx, r_idx), 1.0)
        chi2 = stats.chi2_contingency(table)
        assert chi2.pvalue > 0.001
