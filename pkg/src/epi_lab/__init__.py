"""Numerical laboratory for stability of the entropy power inequality in one dimension."""

from .bounds import (
    BoundReport,
    cor2_check,
    cor3_check,
    cor4_check,
    prop8_check,
    rioul_check,
    rioul_lower_bound,
    smoothing_continuity_check,
    thm1_check,
    thm5_ratio,
    twosided_growth_check,
)
from .densities import (
    DEFAULT_CONFIG,
    Density1D,
    Gaussian,
    Grid,
    Laplace,
    Mixture,
    QuadratureConfig,
    QuarticGibbs,
    absolute_moment,
    gaussian_smooth,
    mixture_counterexample,
    to_grid,
)
from .entropy import differential_entropy, entropy_power, epi_deficit, scaled_sum_density, shannon_epi_report
from .errors import (
    ConfigurationError,
    DegenerateError,
    DomainError,
    EpiLabError,
    HypothesisError,
    NonSmoothPointError,
    NotPSDError,
    ParseError,
    SingularMapError,
    UnsupportedOperationError,
)
from .experiments import run_bound_suite, run_counterexample, run_lemma_fuzz
from .psd import logdet_strong_convexity_check, spectral_decompose, strong_convexity_modulus
from .specs import DensitySpec, format_density_spec, parse_density_spec
from .transport import (
    TransportMap1D,
    brenier_map_1d,
    cheeger_constant,
    delta_inf,
    dF2,
    gaussian_fit_w2,
    radial_profile_map,
    w1_1d,
    w2_1d,
    w2_gaussian_nd,
)

__all__ = [
    "absolute_moment",
    "BoundReport",
    "brenier_map_1d",
    "cheeger_constant",
    "ConfigurationError",
    "cor2_check",
    "cor3_check",
    "cor4_check",
    "DEFAULT_CONFIG",
    "DegenerateError",
    "delta_inf",
    "Density1D",
    "DensitySpec",
    "dF2",
    "differential_entropy",
    "DomainError",
    "entropy_power",
    "epi_deficit",
    "EpiLabError",
    "format_density_spec",
    "Gaussian",
    "gaussian_fit_w2",
    "gaussian_smooth",
    "Grid",
    "HypothesisError",
    "Laplace",
    "logdet_strong_convexity_check",
    "Mixture",
    "mixture_counterexample",
    "NonSmoothPointError",
    "NotPSDError",
    "parse_density_spec",
    "ParseError",
    "prop8_check",
    "QuadratureConfig",
    "QuarticGibbs",
    "radial_profile_map",
    "rioul_check",
    "rioul_lower_bound",
    "run_bound_suite",
    "run_counterexample",
    "run_lemma_fuzz",
    "scaled_sum_density",
    "shannon_epi_report",
    "SingularMapError",
    "smoothing_continuity_check",
    "spectral_decompose",
    "strong_convexity_modulus",
    "thm1_check",
    "thm5_ratio",
    "to_grid",
    "TransportMap1D",
    "twosided_growth_check",
    "UnsupportedOperationError",
    "w1_1d",
    "w2_1d",
    "w2_gaussian_nd",
]

__version__ = "0.1.0"
