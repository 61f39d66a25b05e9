"""Closed-form solutions of the three quadratic portfolio problems.

All three solutions live on the same parabola in (variance, expected return)
space; only the risk-utility maximizer is guaranteed to land on its upper
branch.  The quadratic-utility solver evaluates both the augmented-matrix
form and its rank-one reduction and insists they agree before returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DegenerateFrontierError, InternalConsistencyError, ValidationError
from .moments import AssetMoments, FrontierParams, frontier_params

_DEGENERATE_S = 1e-12
_QU_AGREEMENT_TOL = 1e-10


@dataclass(frozen=True)
class PortfolioWeights:
    """Fully-invested weight vector with its frontier coordinates."""

    w: np.ndarray
    expected_return: float
    variance: float


def _make_weights(m: AssetMoments, w: np.ndarray) -> PortfolioWeights:
    return PortfolioWeights(
        w=w, expected_return=float(w @ m.mu), variance=float(w @ m.sigma @ w)
    )


def _gmv_vector(m: AssetMoments) -> np.ndarray:
    si_one = m.solve(np.ones(m.k))
    return si_one / si_one.sum()


def _q_mu(m: AssetMoments) -> np.ndarray:
    """Q @ mu without forming Q: S^-1 mu - r_gmv * S^-1 1."""
    ones = np.ones(m.k)
    si_one = m.solve(ones)
    si_mu = m.solve(m.mu)
    return si_mu - (float(ones @ si_mu) / float(ones @ si_one)) * si_one


def gmv_weights(m: AssetMoments) -> PortfolioWeights:
    """Global minimum variance portfolio S^-1 1 / (1' S^-1 1)."""
    return _make_weights(m, _gmv_vector(m))


def solve_markowitz(m: AssetMoments, mu0: float) -> PortfolioWeights:
    """Minimum-variance portfolio with target expected return mu0."""
    f = frontier_params(m)
    if f.s <= _DEGENERATE_S:
        if abs(mu0 - f.r_gmv) > 1e-10:
            raise DegenerateFrontierError(
                "mean vector is proportional to ones; the return target is "
                f"feasible only at the vertex return {f.r_gmv}"
            )
        return gmv_weights(m)
    ones = np.ones(m.k)
    si_one = m.solve(ones)
    si_mu = m.solve(m.mu)
    a = float(m.mu @ si_mu)
    b = float(ones @ si_mu)
    c = float(ones @ si_one)
    d = a * c - b * b
    w = ((a - mu0 * b) / d) * si_one + ((mu0 * c - b) / d) * si_mu
    return _make_weights(m, w)


def solve_mvu(m: AssetMoments, alpha: float) -> PortfolioWeights:
    """Maximizer of w'mu - (alpha/2) w'Sw subject to full investment.

    alpha = inf is accepted and returns the minimum-variance vertex.
    """
    if not alpha > 0:
        raise ValidationError(f"risk slope alpha must be positive, got {alpha}")
    w = _gmv_vector(m)
    if not math.isinf(alpha):
        w = w + (1.0 / alpha) * _q_mu(m)
    return _make_weights(m, w)


def solve_qu_augmented(m: AssetMoments, alpha_tilde: float) -> PortfolioWeights:
    """Quadratic-utility solution in terms of the gross second-moment matrix."""
    if not alpha_tilde > 0:
        raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
    ones = np.ones(m.k)
    a_mat = m.augmented_sigma
    chol = linalg.cho_factor(a_mat, lower=True)
    ai_one = linalg.cho_solve(chol, ones)
    ai_mt = linalg.cho_solve(chol, m.mu_tilde)
    denom = float(ones @ ai_one)
    w = ai_one / denom + (1.0 / alpha_tilde) * (
        ai_mt - (float(ones @ ai_mt) / denom) * ai_one
    )
    return _make_weights(m, w)


def solve_qu(m: AssetMoments, alpha_tilde: float) -> PortfolioWeights:
    """Quadratic-utility solution, computed by two independent routes.

    The rank-one reduction of the augmented form must agree with the direct
    augmented-matrix solve to 1e-10 in max norm; the reduced form is returned.
    """
    if not alpha_tilde > 0:
        raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
    f = frontier_params(m)
    coeff = (1.0 / alpha_tilde - 1.0 - f.r_gmv) / (1.0 + f.s)
    w_reduced = _gmv_vector(m) + coeff * _q_mu(m)
    w_direct = solve_qu_augmented(m, alpha_tilde).w
    gap = float(np.abs(w_reduced - w_direct).max())
    if gap > _QU_AGREEMENT_TOL:
        raise InternalConsistencyError(
            f"augmented and reduced quadratic-utility weights differ by {gap}"
        )
    return _make_weights(m, w_reduced)


def frontier_point(f: FrontierParams, v: float, branch: str = "upper") -> float:
    """Expected return of the frontier parabola at variance v on a branch."""
    if branch not in ("upper", "lower"):
        raise ValidationError(f"branch must be 'upper' or 'lower', got {branch!r}")
    if v < f.v_gmv:
        raise ValidationError(f"variance {v} lies below the vertex variance {f.v_gmv}")
    offset = math.sqrt(f.s * (v - f.v_gmv))
    return f.r_gmv + offset if branch == "upper" else f.r_gmv - offset
