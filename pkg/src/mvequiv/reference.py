"""Reference parameter sets bundled with the package.

These drive the default figure datasets and the documented examples; the
estimated set comes from 60 months of MSCI country-index returns for five
developed markets (UK, Germany, USA, Canada, Switzerland).  Only the fitted
frontier parameters are shipped, not the raw series.
"""

from .estimation import EstimatedFrontier
from .moments import FrontierParams

ILLUSTRATION_FRONTIER = FrontierParams(r_gmv=0.014, v_gmv=0.0011, s=0.25)

MSCI_FRONTIER = EstimatedFrontier(
    r_hat=0.0145664, v_hat=0.0010337, s_hat=0.221457, n=60, k=5
)

FIGURE_SLOPES = (0.05, 0.25, 1.25)
