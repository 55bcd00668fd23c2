import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from conftest import X, Y, random_poly, to_sympy
from jacoscope import corpus
from jacoscope.compactify import (PlanarField, bendixson, bendixson_hamiltonian, chart_by_substitution, chart_U,
                                  chart_V, compare_fields, criterion_function, hamiltonian, hamiltonian_field,
                                  infinite_singular_free, inverted_criterion)
from jacoscope.polycore import Poly, PolyMap, circle_power
from jacoscope.polycore import univariate as up

x, y = Poly.variables(2)
F11 = corpus.get("example-1.1").load()
IDENTITY = corpus.get("identity").load()


def pushforward_angles(X_: PlanarField, points: np.ndarray) -> np.ndarray:
    """Angle between b(X)(phi(z)) and D phi(z) X(z) at each point, computed in floats."""
    B = bendixson(X_)
    P, Q = X_.p.compile(), X_.q.compile()
    BU, BV = B.p.compile(), B.q.compile()
    out = []
    for zx, zy in points:
        r2 = zx * zx + zy * zy
        u, v = zx / r2, zy / r2
        # D phi for phi(z) = z / |z|^2
        a = (zy * zy - zx * zx) / r2**2
        b = -2 * zx * zy / r2**2
        px, py = P(zx, zy), Q(zx, zy)
        wx, wy = a * px + b * py, b * px - a * py
        bx, by = BU(u, v), BV(u, v)
        out.append(math.atan2(wx * by - wy * bx, wx * bx + wy * by))
    return np.abs(np.array(out))


# -- Hamiltonian construction -------------------------------------------------------


def test_hamiltonian_field_example():
    H = hamiltonian_field(F11)
    assert H.q == x + 2 * x * y**2 + x * y**4
    assert H.p == -(y + 2 * y * (x**2 + 2 * y**2) + y**3 * (2 * x**2 + 3 * y**2))


def test_hamiltonian_field_identity():
    H = hamiltonian_field(IDENTITY)
    assert (H.p, H.q) == (-y, x)


def test_hamiltonian_function():
    assert hamiltonian(IDENTITY) == (x**2 + y**2) / 2
    assert hamiltonian(F11) == (x**2 + y**2) * (1 + y**2) ** 2 / 2
    assert hamiltonian(PolyMap((x, Poly.zero(2)))) == x**2 / 2
    assert criterion_function(F11) == (x**2 + y**2) * (1 + y**2) ** 2


@pytest.mark.parametrize("name", corpus.MAP_NAMES)
def test_hamiltonian_field_is_divergence_free(name):
    F = corpus.get(name).load()
    H = hamiltonian_field(F)
    assert H.divergence().is_zero()
    h = hamiltonian(F)
    assert (H.p, H.q) == (-h.partial(1), h.partial(0))


def test_hamiltonian_field_needs_planar():
    a, b, c = Poly.variables(3)
    with pytest.raises(ValueError):
        hamiltonian_field(PolyMap((a, b, c)))


# -- Bendixson transform ------------------------------------------------------------------


def test_bendixson_center():
    B = bendixson(PlanarField(-y, x))
    r2 = x**2 + y**2
    assert (B.p, B.q) == (-y * r2, x * r2)
    assert B.provenance == "bendixson"


def test_bendixson_constant_field():
    B = bendixson(PlanarField(Poly.constant(1, 2), Poly.zero(2)))
    assert (B.p, B.q) == (y**2 - x**2, -2 * x * y)


def test_bendixson_matches_sympy_substitution():
    p = x**2 * y - 3 * x + 1
    q = y**3 - x * y
    d = 3
    B = bendixson(PlanarField(p, q))
    r2 = X**2 + Y**2
    sub = {X: X / r2, Y: Y / r2}
    P = sp.expand(sp.cancel(r2**d * to_sympy(p).subs(sub, simultaneous=True)))
    Q = sp.expand(sp.cancel(r2**d * to_sympy(q).subs(sub, simultaneous=True)))
    assert to_sympy(B.p) == sp.expand((Y**2 - X**2) * P - 2 * X * Y * Q)
    assert to_sympy(B.q) == sp.expand((X**2 - Y**2) * Q - 2 * X * Y * P)


def test_bendixson_linear_at_fixed_degree(rng):
    for _ in range(5):
        p1, q1, p2, q2 = (random_poly(rng, 3) for _ in range(4))
        # pad so both fields share the clearing exponent 3
        pad = x**3
        A = PlanarField(p1 + pad, q1)
        B = PlanarField(p2 - pad + x**3 * 2, q2)
        S = PlanarField(A.p + B.p, A.q + B.q)
        assert A.degree == B.degree == S.degree == 3
        bA, bB, bS = bendixson(A), bendixson(B), bendixson(S)
        assert (bS.p, bS.q) == (bA.p + bB.p, bA.q + bB.q)


def test_pushforward_parallel(rng):
    fields = [hamiltonian_field(F11)]
    while len(fields) < 6:
        d = int(rng.integers(1, 5))
        f = PlanarField(random_poly(rng, d), random_poly(rng, d))
        if f.degree >= 1:
            fields.append(f)
    for X_ in fields:
        r = rng.uniform(0.1, 10.0, 400)
        th = rng.uniform(0, 2 * np.pi, 400)
        pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
        P, Q = X_.p.compile(), X_.q.compile()
        norms = np.hypot(P(pts[:, 0], pts[:, 1]), Q(pts[:, 0], pts[:, 1]))
        pts = pts[norms > 1e-6 * norms.max()][:200]
        assert len(pts) == 200
        assert pushforward_angles(X_, pts).max() < 1e-9


@pytest.mark.parametrize("name", corpus.MAP_NAMES)
def test_closed_form_matches_generic_route(name):
    F = corpus.get(name).load()
    cmp = compare_fields(bendixson(hamiltonian_field(F)), bendixson_hamiltonian(F))
    assert cmp.equal_after_normalization
    assert cmp.constant_factor is None


def test_closed_form_matches_on_random_maps(rng):
    for _ in range(4):
        F = PolyMap((random_poly(rng, 3), random_poly(rng, 3)))
        if max(p.degree for p in F) < 1:
            continue
        cmp = compare_fields(bendixson(hamiltonian_field(F)), bendixson_hamiltonian(F))
        assert cmp.equal_after_normalization


def test_identity_closed_form_is_center():
    B = bendixson_hamiltonian(IDENTITY)
    core = compare_fields(B, PlanarField(-y * circle_power(1), x * circle_power(1), "bendixson", ("u", "v")))
    assert core.equal_after_normalization


def test_origin_is_degenerate():
    B = bendixson_hamiltonian(F11)
    for comp in B:
        assert comp.eval_exact((0, 0)) == 0
        assert comp.partial(0).eval_exact((0, 0)) == 0
        assert comp.partial(1).eval_exact((0, 0)) == 0


def test_compare_reports_constant_factor():
    A = PlanarField(x, y)
    B = PlanarField(2 * x, 2 * y)
    cmp = compare_fields(A, B)
    assert not cmp.equal_after_normalization
    assert cmp.constant_factor == 2


# -- charts ------------------------------------------------------------------------------


def test_example_chart_U_restriction():
    ch = chart_U(F11)
    restriction = Poly.from_univariate(ch.restriction_at_equator(), 0, 2)
    assert restriction == (1 + x**2) ** 6
    assert ch.time_rescale_exponent == 4 * ch.d - 1
    # the vbar component vanishes on the equator
    assert ch.field.q.restrict(1, 0).is_zero()


def test_identity_chart_V_negative():
    coeffs = chart_V(IDENTITY).restriction_at_equator()
    assert up.count_real_roots(coeffs) == 0
    assert up.evaluate(coeffs, Fraction(0)) < 0


@pytest.mark.parametrize("name", corpus.MAP_NAMES)
def test_charts_agree_with_direct_substitution(name):
    F = corpus.get(name).load()
    B = bendixson_hamiltonian(F)
    for chart, which in ((chart_U(F), "U"), (chart_V(F), "V")):
        sub = chart_by_substitution(B, which, chart.substitution_exponent)
        assert (sub.p, sub.q) == (chart.field.p, chart.field.q)


def test_chart_substitution_with_sympy():
    B = bendixson_hamiltonian(IDENTITY)
    ch = chart_U(IDENTITY)
    ub, vb = X, Y
    u, v = 1 / vb, ub / vb
    P = to_sympy(B.p).subs({X: u, Y: v}, simultaneous=True)
    Q = to_sympy(B.q).subs({X: u, Y: v}, simultaneous=True)
    # ubar = v/u, vbar = 1/u
    ubar_dot = sp.simplify((Q * u - v * P) / u**2)
    vbar_dot = sp.simplify(-P / u**2)
    k = ch.substitution_exponent
    assert sp.expand(sp.cancel(ubar_dot * vb**k)) == to_sympy(ch.field.p)
    assert sp.expand(sp.cancel(vbar_dot * vb**k)) == to_sympy(ch.field.q)


@pytest.mark.parametrize("name", ["identity", "example-1.1", "triangular"])
def test_infinity_free(name):
    cert = infinite_singular_free(corpus.get(name).load())
    assert cert.free and cert.roots_U == 0 and cert.roots_V == 0


def test_singular_linear_part_has_point_at_infinity():
    cert = infinite_singular_free(corpus.get("invalid-hypothesis").load())
    assert not cert.free
    assert cert.roots_U == 1


def test_inverted_criterion():
    num, den = inverted_criterion(IDENTITY)
    assert num == circle_power(2)
    assert den == circle_power(1)


def test_inverted_criterion_is_reciprocal():
    num, den = inverted_criterion(F11)
    I = criterion_function(F11)
    for u, v in [(Fraction(1, 3), Fraction(-2, 5)), (Fraction(7, 2), Fraction(1, 9))]:
        r2 = u * u + v * v
        assert num.eval_exact((u, v)) / den.eval_exact((u, v)) == 1 / I.eval_exact((u / r2, v / r2))
