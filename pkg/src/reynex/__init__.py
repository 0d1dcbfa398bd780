"""Exact Reynolds-number expansions of Navier-Stokes flows on the torus.

The package computes truncated power-series solutions with exact
rational coefficients, turns their Sobolev growth and truncation error
into exactly-represented series, and integrates a scalar control
inequality whose global boundedness certifies a global smooth solution
at the given Reynolds number.
"""

from .control import (
    Classification,
    ControlParams,
    ControlSolution,
    CriticalResult,
    classify,
    find_critical,
    solve_control,
    solve_scaled_control,
)
from .data import BUILTIN_DATA, bnw_datum, load_datum, parse_datum_spec
from .expansion import (
    ExpansionFamily,
    GradedError,
    datum_error,
    differential_error_closed,
    differential_error_direct,
    expand_terms,
    extend_family,
)
from .fields import (
    FieldReport,
    ScalarExpField,
    VectorExpField,
    linear_combination,
    partial_derivative,
    pointwise_product,
    time_derivative,
    validate,
    value_at_zero,
)
from .norms import (
    CollapsedNormSeries,
    EstimatorBundle,
    FrozenBundle,
    NormSeries,
    RoughErrorEstimator,
    build_estimator_bundle,
    error_series,
    growth_series,
    mode_bound,
    norm_bracket,
    rough_error_estimator,
    sobolev_pairing,
)
from .operators import (
    LerayCache,
    advect,
    duhamel,
    heat_propagate,
    laplacian,
    leray_project,
    ns_bilinear,
)
from .rational import Rational, RationalComplex, rational

__all__ = [
    "BUILTIN_DATA",
    "Classification",
    "CollapsedNormSeries",
    "ControlParams",
    "ControlSolution",
    "CriticalResult",
    "EstimatorBundle",
    "ExpansionFamily",
    "FieldReport",
    "FrozenBundle",
    "GradedError",
    "LerayCache",
    "NormSeries",
    "Rational",
    "RationalComplex",
    "RoughErrorEstimator",
    "ScalarExpField",
    "VectorExpField",
    "advect",
    "bnw_datum",
    "build_estimator_bundle",
    "classify",
    "datum_error",
    "differential_error_closed",
    "differential_error_direct",
    "duhamel",
    "error_series",
    "expand_terms",
    "extend_family",
    "find_critical",
    "growth_series",
    "heat_propagate",
    "laplacian",
    "leray_project",
    "linear_combination",
    "load_datum",
    "mode_bound",
    "norm_bracket",
    "parse_datum_spec",
    "partial_derivative",
    "pointwise_product",
    "rational",
    "rough_error_estimator",
    "sobolev_pairing",
    "solve_control",
    "solve_scaled_control",
    "time_derivative",
    "validate",
    "value_at_zero",
]

__version__ = "0.1.0"
