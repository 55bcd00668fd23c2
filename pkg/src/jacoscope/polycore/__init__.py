"""Exact polynomial arithmetic and the decompositions used across the package."""

from .forms import (
    NotHomogeneousError,
    circle_power,
    gcd_homogeneous_bivariate,
    rational_substitute_clear,
    real_linear_factor_exists,
    strip_circle_power,
)
from .jacobian import BudgetError, determinant, jacobian_det, jacobian_matrix
from .poly import NEG_INF, Poly, PolyMap, Weights, default_names


def partial(p: Poly, var: int) -> Poly:
    return p.partial(var)


def eval_exact(p: Poly, point):
    return p.eval_exact(point)


def eval_float(p: Poly, point) -> float:
    return p.eval_float(point)


def homogeneous_components(p: Poly) -> dict[int, Poly]:
    return p.homogeneous_components()


def quasi_components(p: Poly, w: Weights) -> dict[int, Poly]:
    return p.quasi_components(w)


def leading_quasi(p: Poly, w: Weights) -> Poly:
    return p.leading_quasi(w)


__all__ = [
    "BudgetError",
    "NEG_INF",
    "NotHomogeneousError",
    "Poly",
    "PolyMap",
    "Weights",
    "circle_power",
    "default_names",
    "determinant",
    "eval_exact",
    "eval_float",
    "gcd_homogeneous_bivariate",
    "homogeneous_components",
    "jacobian_det",
    "jacobian_matrix",
    "leading_quasi",
    "partial",
    "quasi_components",
    "rational_substitute_clear",
    "real_linear_factor_exists",
    "strip_circle_power",
]
