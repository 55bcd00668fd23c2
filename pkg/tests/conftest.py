from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import strategies as st

from jacoscope.polycore import Poly

X, Y = sp.symbols("x y")


def to_sympy(p: Poly, syms=None):
    if syms is None:
        syms = (X, Y) if p.nvars == 2 else tuple(sp.symbols(f"z0:{p.nvars}"))
    expr = sp.Integer(0)
    for mono, c in p.terms:
        term = sp.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, mono):
            term *= s**e
        expr += term
    return sp.expand(expr)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, nvars=2, max_degree=4, max_terms=6):
    n_terms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n_terms):
        mono = tuple(draw(st.integers(0, max_degree)) for _ in range(nvars))
        if sum(mono) > max_degree:
            continue
        terms[mono] = draw(coeffs)
    return Poly(nvars, terms)


def random_poly(rng: np.random.Generator, degree: int, nvars: int = 2, density: float = 0.7) -> Poly:
    terms = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            if rng.random() < density:
                terms[(a, b)] = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    return Poly(nvars, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance summary ------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
