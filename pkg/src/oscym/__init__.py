"""Young measures of piecewise-monotone oscillating functions.

Core objects: MOscillatingFunction (monotone/constant branches over a 1-D
domain), ScalarMeasureRCA (density plus atoms on a compact range), the
empirical pushforward oracle, and set-wise weak-convergence checks.
"""

from .domain import (
    Domain1D,
    MOscillatingFunction,
    Piece,
    ValidationReport,
    evaluate,
    evaluate_many,
    invert_piece,
    inverse_slope,
    validate,
)
from .measures import (
    Atom,
    DensityFunction,
    ScalarMeasureRCA,
    integrate_density,
    integrate_test,
    is_probability,
    total_slope,
    tv_norm,
    young_density,
    young_measure,
)
from .sampling import Histogram, compare_histogram, oracle_report, pushforward_empirical
from .convergence import (
    BorelTestFamily,
    ConvergenceVerdict,
    DensitySequence,
    NonhomogeneousDensityFamily,
    converge_young,
    dieudonne_check,
    dieudonne_check_measures,
    homogeneity_check,
    monotone_slope_check,
    weak_continuity_check,
    weak_limit_estimate,
)
from .relaxation import bolza_functional, gradient_young_measure, relaxed_value, sawtooth
from .funcspec import parse_spec

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BorelTestFamily",
    "ConvergenceVerdict",
    "DensityFunction",
    "DensitySequence",
    "Domain1D",
    "Histogram",
    "MOscillatingFunction",
    "NonhomogeneousDensityFamily",
    "Piece",
    "ScalarMeasureRCA",
    "ValidationReport",
    "bolza_functional",
    "compare_histogram",
    "converge_young",
    "dieudonne_check",
    "dieudonne_check_measures",
    "evaluate",
    "evaluate_many",
    "gradient_young_measure",
    "homogeneity_check",
    "integrate_density",
    "integrate_test",
    "inverse_slope",
    "invert_piece",
    "is_probability",
    "monotone_slope_check",
    "oracle_report",
    "parse_spec",
    "pushforward_empirical",
    "relaxed_value",
    "sawtooth",
    "total_slope",
    "tv_norm",
    "validate",
    "weak_continuity_check",
    "weak_limit_estimate",
    "young_density",
    "young_measure",
]
