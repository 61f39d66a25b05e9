"""Brute-force simulation oracle.

Replications draw i.i.d. multivariate normal samples, re-estimate the
frontier from each, and count events — no analytic shortcuts, so the results
are an independent check on the quadrature routines.  Replication i draws
from its own generator seeded by (seed, i); results are therefore identical
whether replications run serially or are farmed out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as _stats

from .errors import ValidationError
from .estimation import ReturnSample
from .moments import AssetMoments, FrontierParams, frontier_params, validate_moments
from .statfns import noncentral_f_cdf, t_quantile

_CHUNK = 8192


@dataclass(frozen=True)
class McConfig:
    n: int
    k: int
    reps: int
    seed: int
    truth: AssetMoments

    def __post_init__(self):
        if self.n <= self.k:
            raise ValidationError(f"need n > k, got n={self.n}, k={self.k}")
        if self.reps < 1:
            raise ValidationError("reps must be at least 1")


@dataclass(frozen=True)
class McSummary:
    estimate: float
    std_error: float
    reps: int
    failures: int = 0


@dataclass(frozen=True)
class PivotDiagnostics:
    """Kolmogorov-Smirnov and correlation diagnostics for the three pivots."""

    ks_v_stat: float
    ks_v_pvalue: float
    ks_s_stat: float
    ks_s_pvalue: float
    ks_r_stat: float
    ks_r_pvalue: float
    corr_v_r: float
    corr_v_s: float
    reps: int
    failures: int


def synthesize_moments(f: FrontierParams, k: int, seed: int) -> AssetMoments:
    """Build (mu, sigma) whose frontier parameters equal f exactly.

    sigma = v_gmv * k * I gives the required vertex variance; the mean is the
    vertex return plus a random direction orthogonal to ones, scaled to hit
    the slope.
    """
    if k < 2:
        raise ValidationError(f"need at least two assets, got k={k}")
    sigma = f.v_gmv * k * np.eye(k)
    mu = np.full(k, f.r_gmv)
    if f.s > 0:
        rng = np.random.default_rng(seed)
        d = rng.standard_normal(k)
        d -= d.mean()  # orthogonal to ones
        while np.linalg.norm(d) < 1e-8:
            d = rng.standard_normal(k)
            d -= d.mean()
        d *= math.sqrt(f.s * f.v_gmv * k) / np.linalg.norm(d)
        mu = mu + d
    return validate_moments(mu, sigma)


def simulate_sample(m: AssetMoments, n: int, rng: np.random.Generator) -> ReturnSample:
    """n i.i.d. normal return vectors via the Cholesky factor of sigma."""
    chol = np.linalg.cholesky(m.sigma)
    z = rng.standard_normal((n, m.k))
    return ReturnSample(m.mu + z @ chol.T)


def _replication_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def simulate_frontier_estimates(cfg: McConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Re-estimated (r_hat, v_hat, s_hat) for every replication.

    Per-replication streams are drawn one by one; the linear algebra is
    batched per chunk.  Returns the three arrays plus the count of
    replications whose sample covariance was numerically singular (entries
    are NaN for those; expected never for n > k).
    """
    n, k = cfg.n, cfg.k
    chol = np.linalg.cholesky(cfg.truth.sigma)
    mu = cfg.truth.mu
    ones = np.ones(k)
    r_out = np.empty(cfg.reps)
    v_out = np.empty(cfg.reps)
    s_out = np.empty(cfg.reps)
    failures = 0
    for start in range(0, cfg.reps, _CHUNK):
        stop = min(start + _CHUNK, cfg.reps)
        batch = np.empty((stop - start, n, k))
        for i in range(start, stop):
            z = _replication_rng(cfg.seed, i).standard_normal((n, k))
            batch[i - start] = mu + z @ chol.T
        mu_hat = batch.mean(axis=1)
        centered = batch - mu_hat[:, None, :]
        sigma_hat = np.einsum("bij,bil->bjl", centered, centered) / (n - 1)
        rhs = np.empty((stop - start, k, 2))
        rhs[:, :, 0] = ones
        rhs[:, :, 1] = mu_hat
        try:
            sol = np.linalg.solve(sigma_hat, rhs)
            bad = np.zeros(stop - start, dtype=bool)
        except np.linalg.LinAlgError:
            sol = np.full((stop - start, k, 2), np.nan)
            bad = np.zeros(stop - start, dtype=bool)
            for j in range(stop - start):
                try:
                    sol[j] = np.linalg.solve(sigma_hat[j], rhs[j])
                except np.linalg.LinAlgError:
                    bad[j] = True
        si_one = sol[:, :, 0]
        si_mu = sol[:, :, 1]
        c = si_one.sum(axis=1)
        b = si_mu.sum(axis=1)
        a = np.einsum("bj,bj->b", si_mu, mu_hat)
        with np.errstate(invalid="ignore"):
            r = b / c
            v = 1.0 / c
            s = np.maximum(a - b * b / c, 0.0)
        r[bad] = v[bad] = s[bad] = np.nan
        failures += int(bad.sum())
        r_out[start:stop] = r
        v_out[start:stop] = v
        s_out[start:stop] = s
    return r_out, v_out, s_out, failures


def _proportion_summary(flags: np.ndarray, failures: int) -> McSummary:
    reps = flags.size
    p = float(np.nanmean(flags)) if reps else float("nan")
    se = math.sqrt(p * (1.0 - p) / reps)
    return McSummary(estimate=p, std_error=se, reps=reps, failures=failures)


def empirical_prob_inefficient(
    cfg: McConfig, mu0: float | None = None, alpha_tilde: float | None = None
) -> McSummary:
    """Fraction of replications whose plug-in inverse risk slope is negative."""
    if (mu0 is None) == (alpha_tilde is None):
        raise ValidationError("provide exactly one of mu0 or alpha_tilde")
    r, _, s, failures = simulate_frontier_estimates(cfg)
    if mu0 is not None:
        flags = (mu0 - r) / s < 0
    else:
        if not alpha_tilde > 0:
            raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
        flags = (1.0 / alpha_tilde - 1.0 - r) / (1.0 + s) < 0
    return _proportion_summary(flags.astype(float), failures)


def simulate_test_statistics(cfg: McConfig, mu0: float) -> np.ndarray:
    """Raw efficiency statistics, one per replication."""
    n, k = cfg.n, cfg.k
    r, v, s, _ = simulate_frontier_estimates(cfg)
    return (
        np.sqrt(n / v)
        * math.sqrt((n - k) / (n - 1))
        * (r - mu0)
        / np.sqrt(1.0 + (n / (n - 1)) * s)
    )


def empirical_power(cfg: McConfig, mu0: float, beta: float) -> McSummary:
    """Rejection frequency of the efficiency test at level beta."""
    if not 0.0 < beta < 1.0:
        raise ValidationError(f"significance level beta must lie in (0, 1), got {beta}")
    stats = simulate_test_statistics(cfg, mu0)
    critical = -t_quantile(1.0 - beta, cfg.n - cfg.k)
    flags = (stats < critical).astype(float)
    return _proportion_summary(flags, int(np.isnan(stats).sum()))


def frontier_pivot_checks(cfg: McConfig) -> PivotDiagnostics:
    """Distributional diagnostics of the re-estimated frontier parameters."""
    n, k = cfg.n, cfg.k
    truth = frontier_params(cfg.truth)
    r, v, s, failures = simulate_frontier_estimates(cfg)
    c0 = n * (n - k + 1) / ((n - 1) * (k - 1))

    v_pivot = (n - 1) * v / truth.v_gmv
    ks_v = _stats.kstest(v_pivot, _stats.chi2(n - k).cdf)

    s_pivot = c0 * s
    ks_s = _stats.kstest(s_pivot, lambda x: noncentral_f_cdf(x, k - 1, n - k + 1, n * truth.s))

    r_pivot = (r - truth.r_gmv) / np.sqrt((1.0 + (n / (n - 1)) * s) * truth.v_gmv / n)
    ks_r = _stats.kstest(r_pivot, _stats.norm.cdf)

    return PivotDiagnostics(
        ks_v_stat=float(ks_v.statistic),
        ks_v_pvalue=float(ks_v.pvalue),
        ks_s_stat=float(ks_s.statistic),
        ks_s_pvalue=float(ks_s.pvalue),
        ks_r_stat=float(ks_r.statistic),
        ks_r_pvalue=float(ks_r.pvalue),
        corr_v_r=float(np.corrcoef(v, r)[0, 1]),
        corr_v_s=float(np.corrcoef(v, s)[0, 1]),
        reps=cfg.reps,
        failures=failures,
    )
