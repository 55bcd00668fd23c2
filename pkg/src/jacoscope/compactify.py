"""Hamiltonian field of a planar map, Bendixson compactification, Poincare charts.

Every construction here is exact.  Two routes to the compactified Hamiltonian
field are kept side by side: the generic transform applied to the Hamiltonian
field (:func:`bendixson` after :func:`hamiltonian_field`) and the closed-form
double sum over homogeneous parts (:func:`bendixson_hamiltonian`).  They are
compared with :func:`compare_fields`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polycore import Poly, PolyMap, circle_power, rational_substitute_clear, strip_circle_power
from .polycore import univariate as up

PROVENANCES = ("raw", "hamiltonian", "bendixson", "chartU", "chartV")

VARS_XY = ("x", "y")
VARS_UV = ("u", "v")
VARS_CHART = ("ubar", "vbar")


@dataclass(frozen=True)
class PlanarField:
    """A polynomial vector field ``(p, q)`` in two variables."""

    p: Poly
    q: Poly
    provenance: str = "raw"
    names: tuple[str, str] = VARS_XY

    def __post_init__(self):
        if self.p.nvars != 2 or self.q.nvars != 2:
            raise ValueError("planar field components must be bivariate")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def degree(self) -> int:
        """``max(deg p, deg q)``, clamped at 0 for the zero field."""
        return int(max(self.p.degree, self.q.degree, 0))

    def __iter__(self):
        return iter((self.p, self.q))

    def eval_exact(self, point) -> tuple[Fraction, Fraction]:
        return self.p.eval_exact(point), self.q.eval_exact(point)

    def divergence(self) -> Poly:
        return self.p.partial(0) + self.q.partial(1)


@dataclass(frozen=True)
class ChartSystem:
    """One Poincare chart of the compactified Hamiltonian field.

    ``time_rescale_exponent`` is the documented ``4d - 1``.  The chart
    polynomials themselves coincide with the direct substitution only under
    the rescaling ``vbar^(4d-2)``, recorded as ``substitution_exponent``.
    """

    field: PlanarField
    chart: str  # "U" or "V"
    d: int
    time_rescale_exponent: int
    substitution_exponent: int

    def restriction_at_equator(self) -> list[Fraction]:
        """``ubar``-component restricted to ``vbar = 0`` as a dense univariate list."""
        return self.field.p.restrict(1, 0).to_univariate(0)


# -- Hamiltonian construction ------------------------------------------------


def _require_planar(F: PolyMap) -> tuple[Poly, Poly]:
    if F.n != 2:
        raise ValueError(f"expected a planar map (f, g); got {F.n} components")
    return F[0], F[1]


def hamiltonian_field(F: PolyMap) -> PlanarField:
    """``(-(f f_y + g g_y), f f_x + g g_x)``."""
    f, g = _require_planar(F)
    p = -(f * f.partial(1) + g * g.partial(1))
    q = f * f.partial(0) + g * g.partial(0)
    return PlanarField(p, q, "hamiltonian", VARS_XY)


def hamiltonian(F: PolyMap) -> Poly:
    """``H = (f^2 + g^2) / 2``."""
    f, g = _require_planar(F)
    return (f * f + g * g) / 2


def criterion_function(F: PolyMap) -> Poly:
    """``I = f^2 + g^2`` (and ``sum f_i^2`` for ``n > 2``)."""
    out = Poly.zero(F.n)
    for c in F:
        out = out + c * c
    return out


# -- Bendixson compactification ----------------------------------------------


def bendixson(X: PlanarField) -> PlanarField:
    """Transform a field through the plane inversion, clearing with ``(u^2+v^2)^d``.

    ``d = max(deg P, deg Q)``; any common ``(u^2+v^2)`` power in the result
    is kept.
    """
    d = X.degree
    u, v = Poly.variables(2)
    P = rational_substitute_clear(X.p, d)
    Q = rational_substitute_clear(X.q, d)
    udot = (v * v - u * u) * P - 2 * u * v * Q
    vdot = (u * u - v * v) * Q - 2 * u * v * P
    return PlanarField(udot, vdot, "bendixson", VARS_UV)


def _homogeneous_parts(p: Poly, d: int) -> list[Poly]:
    comps = p.homogeneous_components()
    return [comps.get(i, Poly.zero(2)) for i in range(d + 1)]


def bendixson_hamiltonian(F: PolyMap) -> PlanarField:
    """Compactified Hamiltonian field built from the double sum over homogeneous parts.

    With ``f = sum f_i`` and ``g = sum g_j`` (``d = max(deg f, deg g)``)::

        udot = sum_ij (u^2+v^2)^(2d-i-j) [(u^2-v^2)(f_i f_jy + g_i g_jy) - 2uv(f_i f_jx + g_i g_jx)]
        vdot = sum_ij (u^2+v^2)^(2d-i-j) [(u^2-v^2)(f_i f_jx + g_i g_jx) + 2uv(f_i f_jy + g_i g_jy)]

    evaluated at ``(u, v)``.  Degree-0 parts are included, so the formula is
    total even before ``F(0) = 0`` normalization.
    """
    f, g = _require_planar(F)
    d = int(max(f.degree, g.degree, 0))
    fs, gs = _homogeneous_parts(f, d), _homogeneous_parts(g, d)
    u, v = Poly.variables(2)
    a = u * u - v * v
    b = 2 * u * v
    udot = Poly.zero(2)
    vdot = Poly.zero(2)
    for i in range(d + 1):
        if fs[i].is_zero() and gs[i].is_zero():
            continue
        for j in range(1, d + 1):
            if fs[j].is_zero() and gs[j].is_zero():
                continue
            ny = fs[i] * fs[j].partial(1) + gs[i] * gs[j].partial(1)
            nx = fs[i] * fs[j].partial(0) + gs[i] * gs[j].partial(0)
            if ny.is_zero() and nx.is_zero():
                continue
            w = circle_power(2 * d - i - j)
            udot = udot + w * (a * ny - b * nx)
            vdot = vdot + w * (a * nx + b * ny)
    return PlanarField(udot, vdot, "bendixson", VARS_UV)


@dataclass(frozen=True)
class FieldComparison:
    equal: bool
    equal_after_normalization: bool
    circle_power_a: int
    circle_power_b: int
    constant_factor: Fraction | None = None
    notes: list[str] = field(default_factory=list)


def _strip_common(X: PlanarField) -> tuple[Poly, Poly, int]:
    p, kp = strip_circle_power(X.p)
    q, kq = strip_circle_power(X.q)
    k = min(kp if not X.p.is_zero() else kq, kq if not X.q.is_zero() else kp)
    p = X.p.exact_div(circle_power(k)) if k else X.p
    q = X.q.exact_div(circle_power(k)) if k else X.q
    return p, q, k


def compare_fields(A: PlanarField, B: PlanarField) -> FieldComparison:
    """Compare two fields up to a shared ``(u^2+v^2)`` power.

    A residual constant factor between otherwise proportional fields is
    reported, not silently absorbed.
    """
    pa, qa, ka = _strip_common(A)
    pb, qb, kb = _strip_common(B)
    equal = A.p == B.p and A.q == B.q
    norm_equal = pa == pb and qa == qb
    factor = None
    notes = []
    if not norm_equal:
        lead = pa if not pa.is_zero() else qa
        other = pb if not pb.is_zero() else qb
        if not lead.is_zero() and not other.is_zero():
            c = other.terms[0][1] / lead.terms[0][1]
            if pa * c == pb and qa * c == qb:
                factor = c
                notes.append(f"fields agree up to the constant factor {c}")
    return FieldComparison(equal, norm_equal, ka, kb, factor, notes)


# -- Poincare charts ---------------------------------------------------------


def _chart_parts(F: PolyMap):
    f, g = _require_planar(F)
    if f.constant_term() or g.constant_term():
        raise ValueError("charts require F(0) = 0; translate the map first")
    d = int(max(f.degree, g.degree))
    if d < 1:
        raise ValueError("charts require a non-constant map")
    return f, g, d, _homogeneous_parts(f, d), _homogeneous_parts(g, d)


def _embed_u(p: Poly, at_first: bool) -> Poly:
    """``h(1, ubar)`` (or ``h(ubar, 1)``) as a polynomial in ``(ubar, vbar)``."""
    terms: dict[tuple[int, int], Fraction] = {}
    for (a, b), c in p.terms:
        e = b if at_first else a
        terms[(e, 0)] = terms.get((e, 0), 0) + c
    return Poly(2, terms)


def _chart(F: PolyMap, which: str) -> ChartSystem:
    f, g, d, fs, gs = _chart_parts(F)
    ub, vb = Poly.variables(2)
    one_plus = 1 + ub * ub
    at_first = which == "U"

    def e(p: Poly) -> Poly:
        return _embed_u(p, at_first)

    sum_u = Poly.zero(2)
    sum_v = Poly.zero(2)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            weight = vb ** (i + j - 2) * one_plus ** (2 * d - i - j)
            fifj = e(fs[i]) * e(fs[j]) + e(gs[i]) * e(gs[j])
            ny = e(fs[i]) * e(fs[j].partial(1)) + e(gs[i]) * e(gs[j].partial(1))
            nx = e(fs[i]) * e(fs[j].partial(0)) + e(gs[i]) * e(gs[j].partial(0))
            sum_u = sum_u + weight * fifj * j
            if at_first:
                sum_v = sum_v + weight * ((1 - ub * ub) * ny - 2 * ub * nx)
            else:
                sum_v = sum_v + weight * ((ub * ub - 1) * nx + 2 * ub * ny)
    if at_first:
        udot = one_plus * sum_u
    else:
        udot = -(one_plus * sum_u)
    vdot = -(vb * sum_v)
    field_ = PlanarField(udot, vdot, "chartU" if at_first else "chartV", VARS_CHART)
    return ChartSystem(field_, which, d, 4 * d - 1, 4 * d - 2)


def chart_U(F: PolyMap) -> ChartSystem:
    """Chart ``u = 1/vbar, v = ubar/vbar`` of the compactified Hamiltonian field."""
    return _chart(F, "U")


def chart_V(F: PolyMap) -> ChartSystem:
    """Chart ``u = ubar/vbar, v = 1/vbar`` of the compactified Hamiltonian field."""
    return _chart(F, "V")


def chart_by_substitution(X: PlanarField, which: str, exponent: int) -> PlanarField:
    """Pull a ``(u, v)`` field into a Poincare chart by direct substitution.

    Computes the chart derivatives and multiplies by ``vbar^exponent``;
    raises ``ValueError`` if the result is not polynomial.  Used as an
    independent check of :func:`chart_U` / :func:`chart_V`.
    """
    deg = X.degree
    ub, vb = Poly.variables(2)
    # homogeneous piece h_k(1/vbar, ubar/vbar) = h_k(1, ubar) / vbar^k
    def pulled(p: Poly) -> tuple[Poly, int]:
        out = Poly.zero(2)
        for k, part in p.homogeneous_components().items():
            out = out + _embed_u(part, which == "U") * vb ** (deg - k)
        return out, deg  # value = out / vbar^deg

    A, _ = pulled(X.p)
    B, _ = pulled(X.q)
    # U: ubar' = vbar (vdot - ubar udot), vbar' = -vbar^2 udot
    # V: ubar' = vbar (udot - ubar vdot), vbar' = -vbar^2 vdot
    if which == "U":
        num_u = vb * (B - ub * A)
        num_v = -(vb * vb * A)
    else:
        num_u = vb * (A - ub * B)
        num_v = -(vb * vb * B)
    shift = exponent - deg
    if shift >= 0:
        mult = vb**shift
        return PlanarField(num_u * mult, num_v * mult, "chartU" if which == "U" else "chartV", VARS_CHART)
    div = vb ** (-shift)
    return PlanarField(num_u.exact_div(div), num_v.exact_div(div),
                       "chartU" if which == "U" else "chartV", VARS_CHART)


@dataclass(frozen=True)
class InfinityCertificate:
    free: bool
    restriction_U: list[Fraction]
    restriction_V: list[Fraction]
    roots_U: int
    roots_V: int

    def to_dict(self) -> dict:
        from .parser import print_poly

        def show(c):
            return print_poly(Poly.from_univariate(c, 0, 2), VARS_CHART)

        return {
            "free": self.free,
            "restriction_U": show(self.restriction_U),
            "restriction_V": show(self.restriction_V),
            "real_roots_U": self.roots_U,
            "real_roots_V": self.roots_V,
        }


def infinite_singular_free(F: PolyMap) -> InfinityCertificate:
    """Exact check that neither chart has a singular point on ``vbar = 0``.

    On ``vbar = 0`` the ``vbar``-component vanishes identically, so singular
    points there are the real roots of the ``ubar``-component, counted by
    Sturm sequences.
    """
    ru = chart_U(F).restriction_at_equator()
    rv = chart_V(F).restriction_at_equator()
    nu = up.count_real_roots(ru) if ru else -1
    nv = up.count_real_roots(rv) if rv else -1
    return InfinityCertificate(nu == 0 and nv == 0, ru, rv, nu, nv)


# -- first integral in inverted coordinates ----------------------------------


def inverted_criterion(F: PolyMap) -> tuple[Poly, Poly]:
    """``(num, den)`` with ``1 / I(u/(u^2+v^2), v/(u^2+v^2)) = num / den``.

    ``num = (u^2+v^2)^k`` and ``den = (u^2+v^2)^k I(...)`` with ``k = deg I``.
    """
    I = criterion_function(F)
    k = int(max(I.degree, 0))
    return circle_power(k), rational_substitute_clear(I, k)
