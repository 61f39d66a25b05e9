import numpy as np
import pytest

from conftest import random_moments
from mvequiv.errors import (
    AsymmetricMatrixError,
    DimensionMismatchError,
    NotPositiveDefiniteError,
    ValidationError,
)
from mvequiv.moments import (
    FrontierParams,
    efficient_set_constants,
    frontier_params,
    q_matrix,
    validate_moments,
)


class TestValidateMoments:
    def test_identity_is_valid(self):
        m = validate_moments([0.0, 1.0], np.eye(2))
        assert m.k == 2
        np.testing.assert_allclose(m.mu_tilde, [1.0, 2.0])

    def test_singular_covariance_rejected(self):
        sigma = np.array([[1.0, 1.0], [1.0, 1.0]])  # zero eigenvalue
        with pytest.raises(NotPositiveDefiniteError):
            validate_moments([0.0, 0.0], sigma)

    def test_asymmetric_rejected(self):
        sigma = np.array([[1.0, 0.2], [0.3, 1.0]])
        with pytest.raises(AsymmetricMatrixError):
            validate_moments([0.0, 0.0], sigma)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DimensionMismatchError):
            validate_moments([0.0, 1.0, 2.0], np.eye(2))
        with pytest.raises(DimensionMismatchError):
            validate_moments([0.0], np.eye(1))

    def test_sample_covariance_instance(self, rng):
        # sample covariance of n=60 > k=5 normal draws is almost surely PD
        data = rng.standard_normal((60, 5))
        m = validate_moments(data.mean(axis=0), np.cov(data, rowvar=False))
        assert m.k == 5

    def test_solve_applies_inverse(self, rng):
        m = random_moments(rng, 4)
        rhs = rng.standard_normal(4)
        np.testing.assert_allclose(m.sigma @ m.solve(rhs), rhs, atol=1e-10)


class TestEfficientSetConstants:
    def test_hand_values(self, simple_moments):
        con = efficient_set_constants(simple_moments)
        assert (con.a, con.b, con.c) == pytest.approx((1.0, 1.0, 2.0), abs=1e-12)

    def test_zero_mean(self):
        m = validate_moments([0.0, 0.0, 0.0], np.eye(3))
        con = efficient_set_constants(m)
        assert con.a == pytest.approx(0.0, abs=1e-15)
        assert con.b == pytest.approx(0.0, abs=1e-15)
        assert con.c == pytest.approx(3.0, abs=1e-12)

    def test_proportional_mean_degenerates(self):
        factor = 0.7
        m = validate_moments(factor * np.ones(3), np.eye(3))
        con = efficient_set_constants(m)
        assert con.a == pytest.approx(factor**2 * con.c, rel=1e-12)
        assert con.b == pytest.approx(factor * con.c, rel=1e-12)
        assert con.a * con.c - con.b**2 == pytest.approx(0.0, abs=1e-12)


class TestFrontierParams:
    def test_hand_values(self, simple_moments):
        f = frontier_params(simple_moments)
        assert (f.r_gmv, f.v_gmv, f.s) == pytest.approx((0.5, 0.5, 0.5), abs=1e-12)

    def test_proportional_mean_gives_zero_slope(self):
        m = validate_moments(0.3 * np.ones(4), np.eye(4))
        assert frontier_params(m).s == 0.0

    def test_direct_construction_for_published_values(self):
        f = FrontierParams(r_gmv=0.014, v_gmv=0.0011, s=0.25)
        assert f.v_gmv > 0

    def test_rejects_bad_vertex(self):
        with pytest.raises(ValidationError):
            FrontierParams(r_gmv=0.0, v_gmv=0.0, s=0.1)
        with pytest.raises(ValidationError):
            FrontierParams(r_gmv=0.0, v_gmv=1.0, s=-0.1)


class TestQMatrix:
    def test_hand_values(self, simple_moments):
        q = q_matrix(simple_moments).q
        np.testing.assert_allclose(q, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-12)

    def test_annihilates_ones(self, rng):
        for k in (2, 5, 9):
            m = random_moments(rng, k)
            q = q_matrix(m).q
            np.testing.assert_allclose(q @ np.ones(k), 0.0, atol=1e-10)

    def test_quadratic_form_equals_slope(self, rng):
        for k in (3, 6):
            m = random_moments(rng, k)
            q = q_matrix(m).q
            assert float(m.mu @ q @ m.mu) == pytest.approx(frontier_params(m).s, abs=1e-10)

    def test_gross_mean_maps_like_mean(self, rng):
        m = random_moments(rng, 5)
        q = q_matrix(m).q
        np.testing.assert_allclose(q @ m.mu_tilde, q @ m.mu, atol=1e-10)

    def test_positive_semidefinite_rank_deficient(self, rng):
        m = random_moments(rng, 6)
        eigs = np.linalg.eigvalsh(q_matrix(m).q)
        assert eigs.min() > -1e-10
        assert (eigs > 1e-10 * eigs.max()).sum() == 5  # rank k-1


class TestRandomInstanceProperties:
    def test_constants_inequality_and_slope_identity(self, rng):
        for _ in range(200):
            k = int(rng.integers(2, 11))
            m = random_moments(rng, k)
            con = efficient_set_constants(m)
            f = frontier_params(m)
            assert con.a * con.c - con.b**2 == pytest.approx(con.c * f.s, rel=1e-8, abs=1e-10)
            assert f.s >= 0.0

    def test_frontier_from_q_forms_matches(self, rng):
        for _ in range(50):
            m = random_moments(rng, int(rng.integers(2, 8)))
            f = frontier_params(m)
            q = q_matrix(m).q
            ones = np.ones(m.k)
            si_one = m.solve(ones)
            c = float(ones @ si_one)
            assert float(m.mu @ q @ m.mu) == pytest.approx(f.s, abs=1e-10)
            assert float(ones @ m.solve(m.mu)) / c == pytest.approx(f.r_gmv, abs=1e-10)
            assert 1.0 / c == pytest.approx(f.v_gmv, abs=1e-10)

    def test_q_invariant_under_mean_shift(self, rng):
        m = random_moments(rng, 5)
        q_before = q_matrix(m).q
        shifted = validate_moments(m.mu + 3.7, m.sigma)
        np.testing.assert_allclose(q_matrix(shifted).q, q_before, atol=1e-12)
