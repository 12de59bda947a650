"""Independent numerical oracles: Monte Carlo, support functions and quadrature."""

from .divergence import QuadratureError, divergence_volume
from .montecarlo import Estimate, McConfig, mc_mean_width, mc_surface_area, mc_volume
from .quadrature import paper_quadrature, revolution_measures
from .support import ConvergenceError, EmptyIntersectionError, support_exact, support_function
