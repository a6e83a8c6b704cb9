"""No-pair relativistic atomic structure laboratory."""

from ._nopair import (
    AccuracyError,
    ConfigError,
    ConvergenceError,
    DomainError,
    KappaConstants,
    NumericError,
    ScfState,
    admissible_region,
    analyze_pictures,
    config_hash,
    dirac_level,
    euler_check,
    fit_scott,
    is_admissible,
    kappa_constants,
    no_pair_boundedness,
    region_boundary,
    scf_solve,
    scott_furry,
    tf_coefficient,
    tf_energy,
    tf_slope,
)

__all__ = [
    "AccuracyError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "KappaConstants",
    "NumericError",
    "ScfState",
    "admissible_region",
    "analyze_pictures",
    "config_hash",
    "dirac_level",
    "euler_check",
    "fit_scott",
    "is_admissible",
    "kappa_constants",
    "no_pair_boundedness",
    "region_boundary",
    "scf_solve",
    "scott_furry",
    "tf_coefficient",
    "tf_energy",
    "tf_slope",
]
