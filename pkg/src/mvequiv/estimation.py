"""Sample estimators of the return moments and of the frontier parameters,
plus the plug-in inverse risk slopes used by the efficiency tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrontierError, SampleTooSmallError, ValidationError
from .moments import AssetMoments, frontier_params, validate_moments


@dataclass(frozen=True)
class ReturnSample:
    """n observations of k per-period decimal returns, n > k, no gaps."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 2:
            raise ValidationError("return sample must be a 2-D array (periods x assets)")
        if not np.all(np.isfinite(x)):
            raise ValidationError("return sample contains missing or non-finite values")
        if x.shape[0] <= x.shape[1]:
            raise SampleTooSmallError(
                f"need more observations than assets: n={x.shape[0]}, k={x.shape[1]}"
            )
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def k(self) -> int:
        return self.x.shape[1]


@dataclass(frozen=True)
class EstimatedFrontier:
    """Plug-in frontier parameters together with the sample dimensions."""

    r_hat: float
    v_hat: float
    s_hat: float
    n: int
    k: int

    def __post_init__(self):
        if not self.v_hat > 0:
            raise ValidationError("v_hat must be positive")
        if self.s_hat < 0:
            raise ValidationError("s_hat must be non-negative")
        if self.n <= self.k:
            raise SampleTooSmallError(f"need n > k, got n={self.n}, k={self.k}")


def sample_moments(sample: ReturnSample) -> AssetMoments:
    """Sample mean and (n-1)-divisor covariance, validated as moments."""
    mu_hat = sample.x.mean(axis=0)
    sigma_hat = np.cov(sample.x, rowvar=False, ddof=1)
    return validate_moments(mu_hat, sigma_hat)


def estimate_frontier(sample: ReturnSample) -> EstimatedFrontier:
    """Plug the sample moments into the frontier parametrization."""
    f = frontier_params(sample_moments(sample))
    return EstimatedFrontier(
        r_hat=f.r_gmv, v_hat=f.v_gmv, s_hat=f.s, n=sample.n, k=sample.k
    )


def estimated_alpha_inverses(
    ef: EstimatedFrontier, mu0: float, alpha_tilde: float
) -> tuple[float, float]:
    """Plug-in inverse risk slopes for the target-return and quadratic-utility
    problems; negative values flag an inefficient estimated solution."""
    if not alpha_tilde > 0:
        raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
    if ef.s_hat == 0:
        raise DegenerateFrontierError("estimated slope is zero; inverse slope undefined")
    alpha1_inv = (mu0 - ef.r_hat) / ef.s_hat
    alpha3_inv = (1.0 / alpha_tilde - 1.0 - ef.r_hat) / (1.0 + ef.s_hat)
    return alpha1_inv, alpha3_inv
