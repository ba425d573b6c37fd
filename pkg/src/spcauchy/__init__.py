"""Spherical Cauchy distributions on the unit hypersphere.

Density and KL divergence are taken with respect to the uniform probability
measure on S^(d-1); sampling is exactly reparameterized through a Moebius
transformation of uniform draws.  See the module docstrings for the
numerical conventions (everything concentration-related is carried in
z = 4*rho/(1+rho)^2 with 1-z kept explicit).
"""

from . import errors
from .bench import (
    APPENDIX_GRID_DIMS,
    APPENDIX_GRID_RHOS,
    LATENT_SWEEP_DIMS,
    BenchConfig,
    BenchRecord,
    SweepPoint,
    run_error_sweep,
    run_latent_step_bench,
    run_robustness_grid,
)
from .distribution import (
    SpCauchy,
    log_density,
    marginal_cos_cdf,
    marginal_cos_density,
    sample,
    stereographic_project,
)
from .errors import SpCauchyError
from .klcore import (
    Interval,
    KlMethod,
    KlResult,
    bracket_width,
    digamma,
    dkl_drho,
    evaluate_kl,
    h_bracket,
    h_core,
    j_closed_low_d,
    j_core,
    kl_asymptotic_high_rho,
    kl_closed_low_d,
    kl_combined,
    kl_hybrid,
    kl_laplace,
    kl_large_d_slope,
    kl_midpoint,
    kl_quadrature,
    kl_series,
    one_minus_z,
    rho_of_z,
    z_of_rho,
)
from .oracles import McEstimate, integrate_adaptive, kl_monte_carlo, kl_reference
from .sphere import (
    geodesic_interpolate,
    moebius_transform,
    normalize,
    sample_uniform_sphere,
)
from .vmf import CurvatureReport, MatchedPair, curvature_report, kappa_of_rho, matched_pair, rho_match

__version__ = "0.1.0"

__all__ = [
    "APPENDIX_GRID_DIMS",
    "APPENDIX_GRID_RHOS",
    "LATENT_SWEEP_DIMS",
    "BenchConfig",
    "BenchRecord",
    "CurvatureReport",
    "Interval",
    "KlMethod",
    "KlResult",
    "MatchedPair",
    "McEstimate",
    "SpCauchy",
    "SpCauchyError",
    "SweepPoint",
    "bracket_width",
    "curvature_report",
    "digamma",
    "dkl_drho",
    "errors",
    "evaluate_kl",
    "geodesic_interpolate",
    "h_bracket",
    "h_core",
    "integrate_adaptive",
    "j_closed_low_d",
    "j_core",
    "kappa_of_rho",
    "kl_asymptotic_high_rho",
    "kl_closed_low_d",
    "kl_combined",
    "kl_hybrid",
    "kl_laplace",
    "kl_large_d_slope",
    "kl_midpoint",
    "kl_monte_carlo",
    "kl_quadrature",
    "kl_reference",
    "kl_series",
    "log_density",
    "marginal_cos_cdf",
    "marginal_cos_density",
    "matched_pair",
    "moebius_transform",
    "normalize",
    "one_minus_z",
    "rho_match",
    "rho_of_z",
    "run_error_sweep",
    "run_latent_step_bench",
    "run_robustness_grid",
    "sample",
    "sample_uniform_sphere",
    "stereographic_project",
    "z_of_rho",
]
