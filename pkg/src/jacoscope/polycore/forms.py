"""Bivariate homogeneous forms and the plane-inversion substitution."""

from __future__ import annotations

from fractions import Fraction

from . import univariate as up
from .poly import Poly


class NotHomogeneousError(ValueError):
    pass


def _require_bivariate(p: Poly) -> None:
    if p.nvars != 2:
        raise ValueError(f"expected a polynomial in 2 variables, got {p.nvars}")


def _require_form(p: Poly) -> None:
    _require_bivariate(p)
    if not p.is_homogeneous():
        raise NotHomogeneousError("input is not a homogeneous bivariate form")


_CIRCLE_POWERS: dict[int, Poly] = {}


def circle_power(k: int) -> Poly:
    """``(u^2 + v^2)^k`` in two variables."""
    if k not in _CIRCLE_POWERS:
        u, v = Poly.variables(2)
        _CIRCLE_POWERS[k] = (u * u + v * v) ** k
    return _CIRCLE_POWERS[k]


def rational_substitute_clear(p: Poly, k: int) -> Poly:
    """``(u^2+v^2)^k * p(u/(u^2+v^2), v/(u^2+v^2))`` as an exact polynomial.

    Each term ``c x^a y^b`` contributes ``c u^a v^b (u^2+v^2)^(k-a-b)``, so no
    rational function is ever formed.
    """
    _require_bivariate(p)
    if p.is_zero():
        return p
    if k < p.degree:
        raise ValueError(f"clearing exponent {k} is below deg p = {p.degree}")
    out = Poly.zero(2)
    for (a, b), c in p.terms:
        out = out + Poly(2, {(a, b): c}) * circle_power(k - a - b)
    return out


def strip_circle_power(p: Poly) -> tuple[Poly, int]:
    """Divide out the largest power of ``u^2+v^2``; return (cofactor, power)."""
    _require_bivariate(p)
    if p.is_zero():
        return p, 0
    q = circle_power(1)
    count = 0
    while p.degree >= 2:
        try:
            p = p.exact_div(q)
        except ValueError:
            break
        count += 1
    return p, count


def _monomial_content(p: Poly) -> tuple[int, int]:
    return (min(m[0] for m, _ in p.terms), min(m[1] for m, _ in p.terms))


def _shift_down(p: Poly, a: int, b: int) -> Poly:
    return Poly(2, {(m[0] - a, m[1] - b): c for m, c in p.terms})


def gcd_homogeneous_bivariate(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two bivariate forms.

    The pure ``x^i y^j`` factors are split off first: dehomogenizing at
    ``y = 1`` would silently drop any power of ``y``.
    """
    _require_form(a)
    _require_form(b)
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    ax, ay = _monomial_content(a)
    bx, by = _monomial_content(b)
    gx, gy = min(ax, bx), min(ay, by)
    ra = _shift_down(a, ax, ay)
    rb = _shift_down(b, bx, by)
    # neither ra nor rb is divisible by x or y, so dehomogenizing is faithful
    ua = ra.restrict(1, 1).to_univariate(0)
    ub = rb.restrict(1, 1).to_univariate(0)
    g = up.gcd(ua, ub)
    dg = up.degree(g)
    core = Poly(2, {(i, dg - i): c for i, c in enumerate(g) if c})
    return _normalize(core * Poly(2, {(gx, gy): 1}))


def _normalize(p: Poly) -> Poly:
    if p.is_zero():
        return p
    return p / p.terms[0][1]


def real_linear_factor_exists(h: Poly) -> tuple[bool, tuple[Fraction, Fraction] | None]:
    """Decide exactly whether the form ``h`` has a real linear factor.

    Returns ``(exists, direction)`` where ``direction`` is a point on the unit
    circle's projective line where ``h`` vanishes: ``(0, 1)`` for the factor
    ``x``, otherwise ``(1, t)`` with ``t`` a root of ``h(1, t)`` (exact when
    rational, else the midpoint of a ``2^-40`` isolating interval).
    """
    _require_form(h)
    if h.is_zero():
        raise ValueError("the zero form vanishes everywhere")
    if h.degree == 0:
        return False, None
    dehom = h.restrict(0, 1).to_univariate(1)
    roots = up.real_roots(dehom)
    if roots:
        return True, (Fraction(1), roots[0])
    if h.eval_exact((0, 1)) == 0:
        return True, (Fraction(0), Fraction(1))
    return False, None

