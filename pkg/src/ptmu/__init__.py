"""Numerical laboratory for cyclicity of inner functions in P^t(mu) spaces."""

__version__ = "0.1.0"

from .analytic import (
    BoundedFunctionSpec,
    Region,
    companion_function,
    cutoff_outer,
    eval_blaschke,
    eval_outer,
    eval_singular_inner,
    min_modulus,
    sobolev_norm,
    taylor_coefficients,
)
from .circle_sets import Arc, CircleSet, distance_to, entropy, is_beurling_carleson, make_cantor_set
from .cyclicity import (
    DistanceCurve,
    DualCertificate,
    cauchy_solve_radial,
    certify,
    classify,
    corona_hypothesis_check,
    distance_curve,
    dual_lower_bound,
    ktheta_functional,
)
from .measures import (
    BoundaryWeight,
    SingularMeasure,
    SpaceMeasure,
    bc_kr_split,
    log_integrability,
    modulus_of_continuity,
    restrict,
    roberts_decompose,
)
from .norms import GramSystem, RadialMoments, gram_system, monomial_decay, pt_norm

__all__ = [
    "Arc",
    "CircleSet",
    "entropy",
    "is_beurling_carleson",
    "distance_to",
    "make_cantor_set",
    "SingularMeasure",
    "BoundaryWeight",
    "SpaceMeasure",
    "modulus_of_continuity",
    "restrict",
    "bc_kr_split",
    "roberts_decompose",
    "log_integrability",
    "BoundedFunctionSpec",
    "Region",
    "eval_singular_inner",
    "eval_blaschke",
    "eval_outer",
    "cutoff_outer",
    "companion_function",
    "min_modulus",
    "sobolev_norm",
    "taylor_coefficients",
    "RadialMoments",
    "GramSystem",
    "pt_norm",
    "monomial_decay",
    "gram_system",
    "DistanceCurve",
    "DualCertificate",
    "distance_curve",
    "cauchy_solve_radial",
    "ktheta_functional",
    "dual_lower_bound",
    "certify",
    "classify",
    "corona_hypothesis_check",
]
