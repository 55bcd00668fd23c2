"""Injectivity criteria and verdict assembly."""

from .algebraic import braun_check, cima_check, degree_check, leading_map, scaling_sandwich, weight_vectors
from .decide import decide
from .properness import criterion_poly, inverted_maxima, properness_check
from .results import CriterionResult, PropernessReport, Verdict, tier2_rule
from .validate import Validation, interval_eval, validate

__all__ = [
    "CriterionResult",
    "PropernessReport",
    "Validation",
    "Verdict",
    "braun_check",
    "cima_check",
    "criterion_poly",
    "decide",
    "degree_check",
    "interval_eval",
    "inverted_maxima",
    "leading_map",
    "properness_check",
    "scaling_sandwich",
    "tier2_rule",
    "validate",
    "weight_vectors",
]
