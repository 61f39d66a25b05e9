import numpy as np
import pytest

from mvequiv.moments import AssetMoments, FrontierParams, validate_moments


def random_moments(rng: np.random.Generator, k: int, mu_scale: float = 0.05) -> AssetMoments:
    """Random positive-definite instance; the ridge keeps eigenvalues away
    from zero so property runs do not flake."""
    factor = rng.standard_normal((k, k))
    sigma = factor @ factor.T
    sigma += 1e-6 * np.trace(sigma) * np.eye(k)
    mu = mu_scale * rng.standard_normal(k)
    return validate_moments(mu, sigma)


@pytest.fixture
def rng():
    return np.random.default_rng(18102023)


@pytest.fixture
def simple_moments():
    """mu = (0, 1), sigma = I: constants (1, 1, 2), vertex (0.5, 0.5), slope 0.5."""
    return validate_moments([0.0, 1.0], np.eye(2))


@pytest.fixture
def illustration_frontier():
    return FrontierParams(r_gmv=0.014, v_gmv=0.0011, s=0.25)
