"""Exact finite-sample inference for mean-variance efficiency.

The probability that an estimated solution falls on the lower branch of the
estimated frontier is a one-dimensional integral of a normal tail against a
non-central F density; the sampling density of the efficiency statistic is
the matching non-central-t mixture.  Semi-infinite integrals are mapped to
(0, 1) with y = t/(1-t) and handled by adaptive Gauss-Kronrod quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import QuadratureFailureError, ValidationError
from .estimation import EstimatedFrontier
from .moments import FrontierParams
from .statfns import (
    DEFAULT_TOLERANCE,
    norm_cdf,
    noncentral_f_pdf,
    noncentral_t_cdf,
    noncentral_t_pdf,
    t_cdf,
    t_quantile,
)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    upper_cut: float = 1e-12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0 and self.upper_cut > 0):
            raise ValidationError("quadrature tolerances must be positive")


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class TestResult:
    statistic: float
    critical_value: float
    p_value: float
    accept_efficiency: bool
    beta: float


def _check_dims(n: int, k: int):
    if k < 2:
        raise ValidationError(f"need at least two assets, got k={k}")
    if n <= k:
        raise ValidationError(f"need n > k, got n={n}, k={k}")


def _pivot_scale(n: int, k: int) -> float:
    """Scaling that turns the estimated slope into a non-central F pivot."""
    return n * (n - k + 1) / ((n - 1) * (k - 1))


def _quad_semi_infinite(fn, q: QuadratureConfig) -> float:
    """Integrate fn over (0, inf) via the t/(1-t) substitution."""

    def transformed(t: float) -> float:
        om = 1.0 - t
        return fn(t / om) / (om * om)

    with warnings.catch_warnings():
        # abserr is checked explicitly below; QUADPACK's roundoff warning is
        # redundant and would leak into callers' test output
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr = integrate.quad(
            transformed, 0.0, 1.0, epsabs=q.abs_tol, epsrel=q.rel_tol, limit=q.max_subdivisions
        )
    if abserr > max(q.abs_tol, q.rel_tol * abs(value)) * 100:
        raise QuadratureFailureError(
            f"quadrature error estimate {abserr} exceeds tolerance for value {value}"
        )
    return value


def lambda_m(f: FrontierParams, mu0: float) -> float:
    """Standardized distance of the return target from the vertex return."""
    return (mu0 - f.r_gmv) / math.sqrt(f.v_gmv)


def lambda_qu(f: FrontierParams, alpha_tilde: float) -> float:
    """Standardized distance for the quadratic-utility problem."""
    if not alpha_tilde > 0:
        raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
    return (1.0 / alpha_tilde - 1.0 - f.r_gmv) / math.sqrt(f.v_gmv)


def prob_inefficient_lambda(
    lam: float, s: float, n: int, k: int, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """P(estimated inverse risk slope < 0) as a function of the standardized
    distance lam and the true slope s."""
    _check_dims(n, k)
    if s < 0:
        raise ValidationError(f"slope s must be non-negative, got {s}")
    c0 = _pivot_scale(n, k)
    ns = n * s

    def integrand(y: float) -> float:
        tail = 1.0 - norm_cdf(lam / math.sqrt(1.0 / n + y / (n - 1)))
        return tail * c0 * noncentral_f_pdf(c0 * y, k - 1, n - k + 1, ns, DEFAULT_TOLERANCE)

    return min(1.0, max(0.0, _quad_semi_infinite(integrand, q)))


def prob_inefficient_m(
    f: FrontierParams, n: int, k: int, mu0: float, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Probability that the estimated target-return solution is inefficient."""
    return prob_inefficient_lambda(lambda_m(f, mu0), f.s, n, k, q)


def prob_inefficient_qu(
    f: FrontierParams,
    n: int,
    k: int,
    alpha_tilde: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Probability that the estimated quadratic-utility solution is inefficient."""
    return prob_inefficient_lambda(lambda_qu(f, alpha_tilde), f.s, n, k, q)


def efficiency_statistic(ef: EstimatedFrontier, mu0: float) -> float:
    """The exact-t pivot comparing the estimated vertex return to mu0."""
    n, k = ef.n, ef.k
    return (
        math.sqrt(n / ef.v_hat)
        * math.sqrt((n - k) / (n - 1))
        * (ef.r_hat - mu0)
        / math.sqrt(1.0 + (n / (n - 1)) * ef.s_hat)
    )


def _run_test(ef: EstimatedFrontier, mu0: float, beta: float) -> TestResult:
    if not 0.0 < beta < 1.0:
        raise ValidationError(f"significance level beta must lie in (0, 1), got {beta}")
    dof = ef.n - ef.k
    statistic = efficiency_statistic(ef, mu0)
    critical = -t_quantile(1.0 - beta, dof)
    return TestResult(
        statistic=statistic,
        critical_value=critical,
        p_value=t_cdf(statistic, dof),
        accept_efficiency=statistic < critical,
        beta=beta,
    )


def test_m_efficiency(ef: EstimatedFrontier, mu0: float, beta: float) -> TestResult:
    """One-sided exact test; acceptance certifies the target-return solution
    as mean-variance efficient at level beta."""
    return _run_test(ef, mu0, beta)


def test_qu_efficiency(ef: EstimatedFrontier, alpha_tilde: float, beta: float) -> TestResult:
    """Same pivot with the return target replaced by 1/alpha_tilde - 1."""
    if not alpha_tilde > 0:
        raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
    return _run_test(ef, 1.0 / alpha_tilde - 1.0, beta)


def acceptance_boundary_mu0(ef: EstimatedFrontier, beta: float) -> float:
    """Smallest return target at which efficiency is accepted at level beta."""
    if not 0.0 < beta < 1.0:
        raise ValidationError(f"significance level beta must lie in (0, 1), got {beta}")
    n, k = ef.n, ef.k
    return ef.r_hat + t_quantile(1.0 - beta, n - k) * math.sqrt(ef.v_hat / n) * math.sqrt(
        (n - 1) / (n - k)
    ) * math.sqrt(1.0 + (n / (n - 1)) * ef.s_hat)


def acceptance_boundary_alpha_tilde(ef: EstimatedFrontier, beta: float) -> float:
    """Largest alpha_tilde at which efficiency is accepted at level beta."""
    return 1.0 / (1.0 + acceptance_boundary_mu0(ef, beta))


def _noncentrality(lam: float, n: int, y: float) -> float:
    # The statistic's numerator is (r_hat - mu0), so conditionally on the
    # slope pivot its t law is centered opposite to lam.
    return -math.sqrt(n) * lam / math.sqrt(1.0 + (n / (n - 1)) * y)


def density_t1(
    x: float,
    f: FrontierParams,
    n: int,
    k: int,
    mu0: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Exact sampling density of the efficiency statistic at x."""
    _check_dims(n, k)
    lam = lambda_m(f, mu0)
    c0 = _pivot_scale(n, k)
    ns = n * f.s
    dof = n - k

    def integrand(y: float) -> float:
        return noncentral_t_pdf(x, dof, _noncentrality(lam, n, y)) * c0 * noncentral_f_pdf(
            c0 * y, k - 1, n - k + 1, ns, DEFAULT_TOLERANCE
        )

    return _quad_semi_infinite(integrand, q)


def cdf_t1(
    x: float,
    f: FrontierParams,
    n: int,
    k: int,
    mu0: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Exact sampling distribution function of the efficiency statistic."""
    _check_dims(n, k)
    lam = lambda_m(f, mu0)
    c0 = _pivot_scale(n, k)
    ns = n * f.s
    dof = n - k

    def integrand(y: float) -> float:
        return noncentral_t_cdf(x, dof, _noncentrality(lam, n, y)) * c0 * noncentral_f_pdf(
            c0 * y, k - 1, n - k + 1, ns, DEFAULT_TOLERANCE
        )

    return min(1.0, max(0.0, _quad_semi_infinite(integrand, q)))


def power_m_test(
    f: FrontierParams,
    n: int,
    k: int,
    mu0: float,
    beta: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Probability that the efficiency test accepts at level beta.

    Equals the mass of the statistic's exact density below the critical
    value; evaluated as the slope-pivot mixture of conditional t tails.
    """
    if not 0.0 < beta < 1.0:
        raise ValidationError(f"significance level beta must lie in (0, 1), got {beta}")
    critical = -t_quantile(1.0 - beta, n - k)
    return cdf_t1(critical, f, n, k, mu0, q)


def power_lambda(
    lam: float,
    s: float,
    n: int,
    k: int,
    beta: float,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Power as a function of the standardized distance lam and slope s."""
    if not 0.0 < beta < 1.0:
        raise ValidationError(f"significance level beta must lie in (0, 1), got {beta}")
    if s < 0:
        raise ValidationError(f"slope s must be non-negative, got {s}")
    # route through an arbitrary vertex; the law depends only on (lam, s, n, k)
    f = FrontierParams(r_gmv=0.0, v_gmv=1.0, s=s)
    return power_m_test(f, n, k, mu0=lam, beta=beta, q=q)
