"""Linear and integer programming bounds for M(N,t)."""

from .model import LPModel, ModelSizeError, build_model, minimal_columns
from .solve import LPError, LPSolution, exact_dual, exact_lp_value, exact_simplex, lp_upper_t, lp_upper_value, solve_lp
from .lower import floor_residuals_lower, integral_floor, lp_lower_t, smooth_lower
from .ip import IPResult, ip_exact, t_exact
from .export import export_model, import_model
