from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import X, Y, polys, to_sympy
from jacoscope.polycore import (BudgetError, NEG_INF, Poly, PolyMap, Weights, circle_power,
                                gcd_homogeneous_bivariate, jacobian_det, rational_substitute_clear,
                                real_linear_factor_exists, strip_circle_power)
from jacoscope.polycore import univariate as up

x, y = Poly.variables(2)
F11 = PolyMap((y + y**3, x + x * y**2))


# -- arithmetic ------------------------------------------------------------------


def test_difference_of_squares():
    assert (x + y) * (x - y) == x**2 - y**2


def test_additive_identity():
    p = 3 * x**2 * y - Fraction(1, 2)
    assert p + Poly.zero(2) == p


def test_square_of_f():
    assert (y + y**3) ** 2 == y**2 + 2 * y**4 + y**6


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(2)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_product_matches_sympy(a, b):
    assert to_sympy(a * b) == sp.expand(to_sympy(a) * to_sympy(b))


def test_zero_degree_convention():
    assert Poly.zero(2).degree == NEG_INF
    assert Poly.zero(2).homogeneous_components() == {}


# -- derivatives and evaluation -------------------------------------------------------


def test_partials():
    assert (y + y**3).partial(1) == 1 + 3 * y**2
    assert (x + x * y**2).partial(0) == 1 + y**2
    assert Poly.constant(7, 2).partial(0).is_zero()


@settings(max_examples=40, deadline=None)
@given(polys())
def test_partial_matches_sympy(p):
    assert to_sympy(p.partial(0)) == sp.diff(to_sympy(p), X)
    assert to_sympy(p.partial(1)) == sp.diff(to_sympy(p), Y)


def test_evaluation():
    assert (x**2 + y**2).eval_exact((3, 4)) == 25
    assert jacobian_det(F11).eval_exact((0, 0)) == -1
    assert Poly.zero(2).eval_exact((Fraction(1, 3), 5)) == 0


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(-64, 64), st.integers(-64, 64))
def test_float_agrees_with_exact(p, a, b):
    px, py = a / 8, b / 8  # exactly representable
    exact = p.eval_exact((Fraction(px), Fraction(py)))
    approx = p.eval_float((px, py))
    scale = max(1.0, sum(abs(float(c)) * max(1.0, abs(px)) ** m[0] * max(1.0, abs(py)) ** m[1]
                         for m, c in p.terms))
    assert abs(approx - float(exact)) <= 1e-12 * scale


# -- decompositions --------------------------------------------------------------------


def test_homogeneous_components_examples():
    assert (y + y**3).homogeneous_components() == {1: y, 3: y**3}
    assert (x + x * y**2).homogeneous_components() == {1: x, 3: x * y**2}
    p = x**2 * y + 3 * x**3 - y**3 + x
    assert p.homogeneous_components() == {1: x, 3: x**2 * y + 3 * x**3 - y**3}


def test_quasi_components_examples():
    w = Weights((1, 2))
    assert (y + y**3).quasi_components(w) == {2: y, 6: y**3}
    assert (y + y**3).leading_quasi(w) == y**3
    assert (x + x * y**2).quasi_components(w) == {1: x, 5: x * y**2}
    assert (x + x * y**2).leading_quasi(w) == x * y**2


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=5))
def test_unit_weights_are_homogeneous(p):
    assert p.quasi_components(Weights((1, 1))) == p.homogeneous_components()


@settings(max_examples=60, deadline=None)
@given(polys(max_degree=5), st.integers(1, 4), st.integers(1, 4))
def test_reassembly(p, s1, s2):
    w = Weights((s1, s2))
    assert sum(p.homogeneous_components().values(), Poly.zero(2)) == p
    assert sum(p.quasi_components(w).values(), Poly.zero(2)) == p


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=5), st.integers(1, 3), st.integers(1, 3),
       st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=7))
def test_quasi_homogeneity(p, s1, s2, lam):
    w = Weights((s1, s2))
    for level, part in p.quasi_components(w).items():
        scaled = part.substitute([x * lam**s1, y * lam**s2])
        assert scaled == part * lam**level


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=5))
def test_euler_identity(p):
    for m, h in p.homogeneous_components().items():
        assert x * h.partial(0) + y * h.partial(1) == h * m


# -- inversion substitution ------------------------------------------------------------


def test_substitution_examples():
    assert rational_substitute_clear(x, 1) == x
    assert rational_substitute_clear(x**2 + y**2, 2) == x**2 + y**2
    assert rational_substitute_clear(y, 2) == y * (x**2 + y**2)


def test_substitution_matches_sympy():
    p = 3 * x**3 * y - x * y + Fraction(5, 2) * y**2 + 1
    r2 = X**2 + Y**2
    expected = sp.expand(sp.simplify(r2**4 * to_sympy(p).subs({X: X / r2, Y: Y / r2}, simultaneous=True)))
    assert to_sympy(rational_substitute_clear(p, 4)) == expected


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=4), st.integers(0, 3))
def test_substitution_exponent_step(p, extra):
    k = max(int(p.degree), 0) + extra if not p.is_zero() else extra
    assert rational_substitute_clear(p, k + 1) == circle_power(1) * rational_substitute_clear(p, k)


@settings(max_examples=40, deadline=None)
@given(polys(max_degree=4))
def test_inversion_twice(p):
    k = max(int(p.degree), 0) if not p.is_zero() else 0
    once = rational_substitute_clear(p, k)
    m = max(int(once.degree), 0) if not once.is_zero() else 0
    twice = rational_substitute_clear(once, m)
    core, power = strip_circle_power(twice)
    if p.is_zero():
        assert twice.is_zero()
    else:
        # (x^2+y^2)^(m-2k) * p, possibly with p's own circle factors absorbed
        pc, pp = strip_circle_power(p)
        assert core == pc
        assert twice == circle_power(power - pp) * p


# -- forms and gcds ---------------------------------------------------------------------


def test_gcd_monomials():
    assert gcd_homogeneous_bivariate(x * y**2, x**2 * y**4) == x * y**2


def test_positive_definite_has_no_linear_factor():
    assert real_linear_factor_exists(x**2 + y**2) == (False, None)


def test_example_top_forms_share_y():
    mu_top = x * y**4
    nu_top = 3 * y**5 + 2 * x**2 * y**3
    g = gcd_homogeneous_bivariate(mu_top, nu_top)
    assert g.exact_div(y) is not None
    exists, direction = real_linear_factor_exists(g)
    assert exists and direction == (1, 0)


def test_gcd_matches_sympy():
    a = (x - 2 * y) * (x**2 + y**2) * y
    b = (x - 2 * y) * (x + y) * y**2
    g = gcd_homogeneous_bivariate(a, b)
    ratio = sp.simplify(to_sympy(g) / sp.gcd(to_sympy(a), to_sympy(b)))
    assert ratio.is_number and ratio != 0


def test_irrational_direction():
    exists, direction = real_linear_factor_exists(x**2 - 2 * y**2)
    assert exists
    assert direction[0] == 1 and abs(float(direction[1]) ** 2 - 0.5) < 1e-10


# -- univariate ----------------------------------------------------------------------------


def test_sturm_counts():
    assert up.count_real_roots([-2, 0, 1]) == 2  # t^2 - 2
    assert up.count_real_roots([1, 0, 1]) == 0
    assert up.count_real_roots([0, -1, 0, 1]) == 3  # t^3 - t
    assert up.count_real_roots([0, -1, 0, 1], 0, 1) == 1  # (0, 1]


def test_isolation_width():
    roots = up.isolate_real_roots([-2, 0, 1])
    assert len(roots) == 2
    for a, b in roots:
        assert b - a <= up.DEFAULT_WIDTH
        assert a <= b


# -- jacobian -------------------------------------------------------------------------------


def test_jacobian_examples():
    assert jacobian_det(PolyMap((x, y))) == Poly.constant(1, 2)
    assert jacobian_det(F11) == -1 - 4 * y**2 - 3 * y**4
    assert jacobian_det(F11) == -(1 + y**2) * (1 + 3 * y**2)
    assert jacobian_det(PolyMap((x**2, y))) == 2 * x


def test_jacobian_3d_matches_sympy():
    a, b, c = Poly.variables(3)
    F = PolyMap((a + b * c, b + a**2, c - a * b))
    z = sp.symbols("z0:3")
    M = sp.Matrix([[sp.diff(to_sympy(p), v) for v in z] for p in F])
    assert to_sympy(jacobian_det(F)) == sp.expand(M.det())


def test_determinant_budget():
    vs = Poly.variables(7)
    with pytest.raises(BudgetError):
        jacobian_det(PolyMap(vs))
