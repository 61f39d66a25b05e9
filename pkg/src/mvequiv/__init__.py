"""Closed-form quadratic portfolio optimizers, their equivalence mappings,
and exact finite-sample inference on mean-variance efficiency."""

from .equivalence import EquivalenceResult, map_m_to_mvu, map_qu_to_mvu, verify_equivalence
from .estimation import (
    EstimatedFrontier,
    ReturnSample,
    estimate_frontier,
    estimated_alpha_inverses,
    sample_moments,
)
from .inference import (
    QuadratureConfig,
    TestResult,
    density_t1,
    power_lambda,
    power_m_test,
    prob_inefficient_lambda,
    prob_inefficient_m,
    prob_inefficient_qu,
    test_m_efficiency,
    test_qu_efficiency,
)
from .mc_oracle import (
    McConfig,
    McSummary,
    empirical_power,
    empirical_prob_inefficient,
    frontier_pivot_checks,
    simulate_sample,
    synthesize_moments,
)
from .moments import (
    AssetMoments,
    EfficientSetConstants,
    FrontierParams,
    QMatrix,
    efficient_set_constants,
    frontier_params,
    q_matrix,
    validate_moments,
)
from .solvers import (
    PortfolioWeights,
    frontier_point,
    gmv_weights,
    solve_markowitz,
    solve_mvu,
    solve_qu,
)

__version__ = "0.1.0"
