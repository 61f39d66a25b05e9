"""Mappings that align the target-return and quadratic-utility problems with
the risk-utility problem, plus the efficiency verdict they imply.

A solution is mean-variance efficient exactly when the mapped inverse risk
slope is non-negative; the boundary (inverse slope zero) maps to the
minimum-variance vertex and is classified efficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFrontierError, ValidationError
from .moments import AssetMoments, FrontierParams, frontier_params
from .solvers import solve_markowitz, solve_mvu, solve_qu


@dataclass(frozen=True)
class EquivalenceResult:
    """Mapped inverse slope, the slope itself (inf at the vertex, None when
    the input is inefficient), the standardized distance lam, and the verdict."""

    alpha_inv: float
    alpha: float | None
    lam: float
    efficient: bool


def _build(alpha_inv: float, lam: float) -> EquivalenceResult:
    if alpha_inv > 0:
        alpha = 1.0 / alpha_inv
    elif alpha_inv == 0:
        alpha = math.inf
    else:
        alpha = None
    return EquivalenceResult(
        alpha_inv=alpha_inv, alpha=alpha, lam=lam, efficient=alpha_inv >= 0
    )


def map_m_to_mvu(f: FrontierParams, mu0: float) -> EquivalenceResult:
    """Risk slope at which the target-return solution is a risk-utility solution."""
    if f.s <= 0:
        if mu0 != f.r_gmv:
            raise DegenerateFrontierError(
                "zero slope: the target-return problem is feasible only at the vertex"
            )
        return _build(0.0, 0.0)
    alpha_inv = (mu0 - f.r_gmv) / f.s
    lam = (mu0 - f.r_gmv) / math.sqrt(f.v_gmv)
    return _build(alpha_inv, lam)


def map_qu_to_mvu(f: FrontierParams, alpha_tilde: float) -> EquivalenceResult:
    """Risk slope at which the quadratic-utility solution is a risk-utility one."""
    if not alpha_tilde > 0:
        raise ValidationError(f"alpha_tilde must be positive, got {alpha_tilde}")
    shift = 1.0 / alpha_tilde - 1.0 - f.r_gmv
    alpha_inv = shift / (1.0 + f.s)
    lam = shift / math.sqrt(f.v_gmv)
    return _build(alpha_inv, lam)


def verify_equivalence(
    m: AssetMoments,
    mu0: float | None = None,
    alpha_tilde: float | None = None,
    tol: float = 1e-9,
) -> bool:
    """Check that the mapped risk-utility solution reproduces the original
    weights to ``tol`` in max norm.  Exactly one of mu0 / alpha_tilde is given;
    the mapping must classify the input as efficient."""
    if (mu0 is None) == (alpha_tilde is None):
        raise ValidationError("provide exactly one of mu0 or alpha_tilde")
    f = frontier_params(m)
    if mu0 is not None:
        res = map_m_to_mvu(f, mu0)
        original = solve_markowitz(m, mu0)
    else:
        res = map_qu_to_mvu(f, alpha_tilde)
        original = solve_qu(m, alpha_tilde)
    if not res.efficient:
        raise ValidationError("mapping classifies the input as inefficient")
    mapped = solve_mvu(m, res.alpha)
    return float(np.abs(original.w - mapped.w).max()) <= tol
