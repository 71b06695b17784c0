"""Approximation numbers of composition operators on the Hardy space H^2 of the disc.

Numerical singular values, certified lower and upper bounds built from
reproducing kernels and Blaschke products, and decay-rate experiments.
"""
from .blaschke import BlaschkeProduct, build_curve_blaschke, build_radial_blaschke, monomial_blaschke
from .bounds import BoundReport, best_lower, best_upper
from .checks import CHECKS, CheckResult, run_check
from .config import DEFAULT, Config, load_config
from .disc_geometry import DiscPoints, SampledCurve, hyp_dist, pseudo_dist
from .errors import CompopError, ConfigError, ConvergenceError, DomainError
from .experiments import SweepRow, build_symbol, emit_csv, fit_decay, parse_csv, parse_symbol_spec, sweep
from .operator_numerics import approximation_numbers, galerkin_matrix, reference_singular_values
from .symbols import CornerSymbol, ProfileSymbol, ScalarSymbol, cusp_profile, power_profile, prescribed_profile

__version__ = "0.1.0"

__all__ = [
    "BlaschkeProduct", "BoundReport", "CHECKS", "CheckResult", "CompopError", "Config", "ConfigError",
    "ConvergenceError", "CornerSymbol", "DEFAULT", "DiscPoints", "DomainError", "ProfileSymbol",
    "SampledCurve", "ScalarSymbol", "SweepRow", "approximation_numbers", "best_lower", "best_upper",
    "build_curve_blaschke", "build_radial_blaschke", "build_symbol", "cusp_profile", "emit_csv",
    "fit_decay", "galerkin_matrix", "hyp_dist", "load_config", "monomial_blaschke", "parse_csv",
    "parse_symbol_spec", "power_profile", "prescribed_profile", "pseudo_dist", "reference_singular_values",
    "run_check", "sweep",
]
