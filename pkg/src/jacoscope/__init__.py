"""Symbolic-numeric analysis of global injectivity for polynomial maps."""

from .parser import ParseError, parse_map, parse_poly, print_map, print_poly
from .polycore import Poly, PolyMap, Weights

__version__ = "0.1.0"

__all__ = [
    "ParseError",
    "Poly",
    "PolyMap",
    "Weights",
    "parse_map",
    "parse_poly",
    "print_map",
    "print_poly",
]
