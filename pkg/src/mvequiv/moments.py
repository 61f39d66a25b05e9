"""Asset-return moments, efficient-set constants, frontier parameters and
the projection matrix that annihilates the ones vector.

Every application of the inverse covariance goes through the cached Cholesky
factor; an explicit inverse is never formed (the projection matrix is built
from Cholesky solves against the identity).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import (
    AsymmetricMatrixError,
    DimensionMismatchError,
    InternalConsistencyError,
    NotPositiveDefiniteError,
    ValidationError,
)

_SYMMETRY_TOL = 1e-12
_SLOPE_CLAMP = 1e-12


@dataclass(frozen=True)
class AssetMoments:
    """Validated mean vector and positive-definite covariance of k assets.

    Construct through :func:`validate_moments`.  ``solve(rhs)`` applies the
    inverse covariance via the cached Cholesky factor.
    """

    mu: np.ndarray
    sigma: np.ndarray
    _chol: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return self.mu.size

    @property
    def mu_tilde(self) -> np.ndarray:
        """Gross-return mean vector 1 + mu."""
        return 1.0 + self.mu

    @property
    def augmented_sigma(self) -> np.ndarray:
        """Second-moment matrix of gross returns: sigma + mu_tilde mu_tilde'."""
        return self.sigma + np.outer(self.mu_tilde, self.mu_tilde)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Return sigma^{-1} @ rhs via the cached Cholesky factor."""
        return linalg.cho_solve((self._chol, True), rhs)


@dataclass(frozen=True)
class EfficientSetConstants:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValidationError("c = 1' sigma^{-1} 1 must be positive")


@dataclass(frozen=True)
class FrontierParams:
    """Vertex and slope of the frontier parabola in (variance, return) space."""

    r_gmv: float
    v_gmv: float
    s: float

    def __post_init__(self):
        if not self.v_gmv > 0:
            raise ValidationError("v_gmv must be positive")
        if self.s < 0:
            raise ValidationError("slope s must be non-negative")


@dataclass(frozen=True)
class QMatrix:
    q: np.ndarray


def validate_moments(mu, sigma) -> AssetMoments:
    """Validate (mu, sigma) and cache the Cholesky factor of sigma."""
    mu = np.asarray(mu, dtype=float).ravel()
    sigma = np.asarray(sigma, dtype=float)
    if mu.size < 2:
        raise DimensionMismatchError("at least two assets are required")
    if sigma.shape != (mu.size, mu.size):
        raise DimensionMismatchError(
            f"covariance shape {sigma.shape} does not match {mu.size} assets"
        )
    if not np.all(np.isfinite(mu)) or not np.all(np.isfinite(sigma)):
        raise ValidationError("moments must be finite")
    scale = max(1.0, float(np.abs(sigma).max()))
    if np.abs(sigma - sigma.T).max() > _SYMMETRY_TOL * scale:
        raise AsymmetricMatrixError("covariance matrix is not symmetric")
    sigma = 0.5 * (sigma + sigma.T)
    try:
        chol = linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("covariance matrix is not positive definite") from exc
    return AssetMoments(mu=mu, sigma=sigma, _chol=chol)


def efficient_set_constants(m: AssetMoments) -> EfficientSetConstants:
    """Quadratic forms a = mu' S^-1 mu, b = 1' S^-1 mu, c = 1' S^-1 1."""
    ones = np.ones(m.k)
    si_mu = m.solve(m.mu)
    si_one = m.solve(ones)
    return EfficientSetConstants(
        a=float(m.mu @ si_mu), b=float(ones @ si_mu), c=float(ones @ si_one)
    )


def frontier_params(m: AssetMoments) -> FrontierParams:
    """Frontier vertex (r_gmv, v_gmv) and slope s from the constants."""
    con = efficient_set_constants(m)
    s = con.a - con.b**2 / con.c
    if s < 0:
        if s < -_SLOPE_CLAMP * max(1.0, abs(con.a)):
            raise InternalConsistencyError(f"slope s = {s} is negative beyond roundoff")
        s = 0.0
    return FrontierParams(r_gmv=con.b / con.c, v_gmv=1.0 / con.c, s=s)


def q_matrix(m: AssetMoments) -> QMatrix:
    """Projection S^-1 - S^-1 1 1' S^-1 / (1' S^-1 1); annihilates ones."""
    ones = np.ones(m.k)
    si_one = m.solve(ones)
    sigma_inv = m.solve(np.eye(m.k))
    q = sigma_inv - np.outer(si_one, si_one) / float(ones @ si_one)
    return QMatrix(q=0.5 * (q + q.T))
