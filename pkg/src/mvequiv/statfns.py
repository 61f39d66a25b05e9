"""Scalar special functions and probability densities.

Central chi-square / F / Student-t densities are written in log space via
``scipy.special.gammaln`` so large degrees of freedom do not overflow.  The
non-central F density and CDF are evaluated as Poisson-weighted mixtures of
central F laws, truncated once the cumulative Poisson mass reaches
``1 - series_tol``.  The non-central t density delegates to scipy's Boost
backend, which stays accurate for the large noncentralities that show up in
power calculations.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special
from scipy import stats as _stats

from .errors import ValidationError

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DensityTolerance:
    """Truncation control for the Poisson-mixture series."""

    series_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.series_tol > 0:
            raise ValidationError("series_tol must be positive")
        if self.max_terms < 1:
            raise ValidationError("max_terms must be at least 1")


DEFAULT_TOLERANCE = DensityTolerance()


def norm_pdf(x: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def norm_cdf(x: float) -> float:
    """Standard normal distribution function (erfc-based, tail-accurate)."""
    return 0.5 * math.erfc(-x / _SQRT_2)


def _check_dof(value, name):
    if value < 1:
        raise ValidationError(f"{name} must be >= 1, got {value}")


def chi2_pdf(x: float, n: int) -> float:
    """Chi-square density with n degrees of freedom; 0 outside (0, inf)."""
    _check_dof(n, "n")
    if x <= 0:
        return 0.0
    h = 0.5 * n
    return math.exp((h - 1.0) * math.log(x) - 0.5 * x - special.gammaln(h) - h * math.log(2.0))


def f_pdf(x: float, n1: float, n2: float) -> float:
    """Central F density with (n1, n2) degrees of freedom."""
    _check_dof(n1, "n1")
    _check_dof(n2, "n2")
    if x <= 0:
        return 0.0
    h1, h2 = 0.5 * n1, 0.5 * n2
    log_pdf = (
        h1 * math.log(n1 / n2)
        + (h1 - 1.0) * math.log(x)
        - (h1 + h2) * math.log1p(n1 * x / n2)
        - special.betaln(h1, h2)
    )
    return math.exp(log_pdf)


def f_cdf(x, n1: float, n2: float):
    """Central F distribution function (regularized incomplete beta)."""
    _check_dof(n1, "n1")
    _check_dof(n2, "n2")
    x = np.asarray(x, dtype=float)
    z = n1 * x / (n1 * x + n2)
    out = np.where(x > 0, special.betainc(0.5 * n1, 0.5 * n2, np.where(x > 0, z, 0.0)), 0.0)
    return out if out.ndim else float(out)


def t_pdf(x: float, p: float) -> float:
    """Central Student-t density with p degrees of freedom."""
    _check_dof(p, "p")
    log_pdf = (
        special.gammaln(0.5 * (p + 1.0))
        - special.gammaln(0.5 * p)
        - 0.5 * math.log(p * math.pi)
        - 0.5 * (p + 1.0) * math.log1p(x * x / p)
    )
    return math.exp(log_pdf)


def t_cdf(x, p: float):
    """Central Student-t distribution function."""
    _check_dof(p, "p")
    out = special.stdtr(p, x)
    return float(out) if np.ndim(out) == 0 else out


@functools.lru_cache(maxsize=256)
def _poisson_log_weights_cached(lam_half: float, series_tol: float, max_terms: int) -> np.ndarray:
    # grow the window geometrically past the Poisson bulk until the retained
    # mass reaches 1 - series_tol
    guess = int(lam_half + 12.0 * math.sqrt(lam_half) + 30.0)
    while True:
        count = min(guess, max_terms)
        js = np.arange(count)
        log_w = -lam_half + js * math.log(lam_half) - special.gammaln(js + 1.0)
        cum = np.cumsum(np.exp(log_w))
        idx = int(np.searchsorted(cum, 1.0 - series_tol))
        if idx < count or count == max_terms:
            return log_w[: min(idx + 1, max_terms)]
        guess *= 2


def _poisson_log_weights(lam_half: float, tol: DensityTolerance) -> np.ndarray:
    """Log Poisson(lam_half) weights for j = 0..J, J chosen so the retained
    mass is at least 1 - series_tol (or max_terms is hit)."""
    return _poisson_log_weights_cached(lam_half, tol.series_tol, tol.max_terms)


def noncentral_f_pdf(
    x: float, n1: float, n2: float, lam: float, tol: DensityTolerance = DEFAULT_TOLERANCE
) -> float:
    """Non-central F density via the Poisson mixture of central F laws.

    With J ~ Poisson(lam/2), F(n1, n2, lam) equals ((n1+2J)/n1) * F(n1+2J, n2),
    so the density is the matching mixture of rescaled central F densities.
    """
    _check_dof(n1, "n1")
    _check_dof(n2, "n2")
    if lam < 0:
        raise ValidationError("noncentrality must be >= 0")
    if lam == 0.0:
        return f_pdf(x, n1, n2)
    if x <= 0:
        return 0.0
    log_w = _poisson_log_weights(0.5 * lam, tol)
    js = np.arange(log_w.size)
    h1 = 0.5 * n1 + js
    h2 = 0.5 * n2
    # density of ((n1+2j)/n1) * F(n1+2j, n2) at x, in log space
    u = n1 * x / n2  # = (n1+2j) * (x*n1/(n1+2j)) / n2 for every j
    log_term = (
        h1 * math.log(u)
        - math.log(x)
        - (h1 + h2) * math.log1p(u)
        - special.betaln(h1, h2)
    )
    return float(np.sum(np.exp(log_w + log_term)))


def noncentral_f_cdf(x, n1: float, n2: float, lam: float, tol: DensityTolerance = DEFAULT_TOLERANCE):
    """Non-central F distribution function (term-by-term integral of the
    Poisson mixture; vectorized over x)."""
    _check_dof(n1, "n1")
    _check_dof(n2, "n2")
    if lam < 0:
        raise ValidationError("noncentrality must be >= 0")
    x = np.asarray(x, dtype=float)
    if lam == 0.0:
        return f_cdf(x, n1, n2)
    log_w = _poisson_log_weights(0.5 * lam, tol)
    w = np.exp(log_w)
    js = np.arange(log_w.size)
    h1 = 0.5 * n1 + js
    h2 = 0.5 * n2
    z = n1 * x / (n1 * x + n2)  # scale-invariant: same argument for every j
    z = np.clip(np.atleast_1d(z), 0.0, 1.0)
    terms = special.betainc(h1[:, None], h2, z.ravel()[None, :])
    out = (w @ terms).reshape(x.shape)
    out = np.where(x > 0, out, 0.0)
    return float(out) if out.ndim == 0 else out


def noncentral_t_pdf(x, p: float, gamma: float):
    """Non-central t density with p degrees of freedom and noncentrality gamma."""
    _check_dof(p, "p")
    if gamma == 0.0 and np.ndim(x) == 0:
        return t_pdf(float(x), p)
    out = _stats.nct.pdf(x, p, gamma)
    return float(out) if np.ndim(out) == 0 else out


def noncentral_t_cdf(x, p: float, gamma: float):
    """Non-central t distribution function."""
    _check_dof(p, "p")
    if gamma == 0.0:
        return t_cdf(x, p)
    out = _stats.nct.cdf(x, p, gamma)
    return float(out) if np.ndim(out) == 0 else out


def t_quantile(prob: float, p: float) -> float:
    """Central-t quantile by bracketed root finding on the CDF.

    The bracket is grown by doubling from [-1, 1]; Brent's method then
    converges on the unique root of CDF(q) = prob.
    """
    _check_dof(p, "p")
    if not 0.0 < prob < 1.0:
        raise ValidationError(f"prob must lie in (0, 1), got {prob}")
    if prob == 0.5:
        return 0.0
    lo, hi = -1.0, 1.0
    while t_cdf(lo, p) > prob:
        lo *= 2.0
    while t_cdf(hi, p) < prob:
        hi *= 2.0
    return float(optimize.brentq(lambda q: t_cdf(q, p) - prob, lo, hi, xtol=1e-14, rtol=1e-15))
