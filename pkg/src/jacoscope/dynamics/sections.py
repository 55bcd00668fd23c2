"""Transversal sections and first-return maps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..compactify import PlanarField
from ..polycore import Poly
from ..polycore import univariate as up
from .integrate import FieldFunction, Stepper, bisect_event


class NotTransverseError(ValueError):
    pass


@dataclass(frozen=True)
class Section:
    a: tuple[float, float]
    b: tuple[float, float]
    contact_points: int | None = None

    @property
    def direction(self) -> tuple[float, float]:
        return self.b[0] - self.a[0], self.b[1] - self.a[1]

    @property
    def length(self) -> float:
        return math.hypot(*self.direction)

    def side(self, z) -> float:
        """Signed cross product of the section direction with ``z - a``."""
        dx, dy = self.direction
        return dx * (z[1] - self.a[1]) - dy * (z[0] - self.a[0])

    def parameter(self, z) -> float:
        dx, dy = self.direction
        return ((z[0] - self.a[0]) * dx + (z[1] - self.a[1]) * dy) / (dx * dx + dy * dy)

    def point(self, lam: float) -> tuple[float, float]:
        dx, dy = self.direction
        return self.a[0] + lam * dx, self.a[1] + lam * dy


@dataclass
class Crossing:
    point: tuple[float, float]
    parameter: float
    time: float
    steps: int


def contact_polynomial(X: PlanarField, a, direction) -> list[Fraction]:
    """``c(s) = det(direction, X(a + s*direction))`` as an exact univariate polynomial in ``s``."""
    ax, ay = (Fraction(v) for v in a)
    dx, dy = (Fraction(v) for v in direction)
    s = Poly.variable(0, 1)
    line = [Poly.constant(ax, 1) + s * dx, Poly.constant(ay, 1) + s * dy]
    c = X.q.substitute(line) * dx - X.p.substitute(line) * dy
    return c.to_univariate(0)


def count_contact_points(X: PlanarField, a, b) -> int:
    """Number of distinct points of the segment ``(a, b]`` where the field is tangent to it.

    Exact Sturm count; a common factor ``s^m`` (the section starting at a
    singular point) is removed first.  Returns -1 if the segment lies on an
    invariant line (the contact polynomial vanishes identically).
    """
    direction = (Fraction(b[0]) - Fraction(a[0]), Fraction(b[1]) - Fraction(a[1]))
    c = contact_polynomial(X, a, direction)
    if not c:
        return -1
    m = next(i for i, v in enumerate(c) if v != 0)
    c = c[m:]
    if len(c) == 1:
        return 0
    return up.count_real_roots(c, Fraction(0), Fraction(1))


def choose_section(X: PlanarField, center=(0.0, 0.0), length: float = 1.0,
                   extra_candidates: int = 0) -> Section:
    """Pick a ray segment from ``center`` free of contact points.

    A line meets the contact curve of a degree-``d`` field in at most ``d``
    points, so ``d + 1`` evenly spaced candidate rays are tried first
    (offset from the axes), then ``extra_candidates`` more at finer spacing.
    """
    d = max(X.degree, 1)
    tried = []
    for count in (d + 1, 4 * (d + 1) + extra_candidates):
        for k in range(count):
            theta = 2 * math.pi * (k + 0.5) / count + 0.1
            direction = (Fraction(math.cos(theta)).limit_denominator(1 << 20) * Fraction(length),
                         Fraction(math.sin(theta)).limit_denominator(1 << 20) * Fraction(length))
            a = (Fraction(center[0]), Fraction(center[1]))
            b = (a[0] + direction[0], a[1] + direction[1])
            n = count_contact_points(X, a, b)
            tried.append(n)
            if n == 0:
                return Section((float(a[0]), float(a[1])), (float(b[0]), float(b[1])), 0)
    raise NotTransverseError(f"no contact-free ray found among {len(tried)} candidates")


def return_map(X: PlanarField, section: Section | tuple, p, direction: int = 1,
               tol: float = 1e-10, max_steps: int = 200_000, precision: float = 1e-10,
               center=None, transverse_tol: float = 1e-6) -> Crossing | None:
    """Next crossing of ``section`` by the orbit through ``p`` in the same sense.

    ``p`` must lie on the section and the field there must make an angle of
    at least ``transverse_tol`` with it.  Crossings are detected by a sign
    change of the cross-product coordinate and refined by bisection until
    the bracketing points are within ``precision`` (times the section
    length) of each other.  Returns ``None`` when no crossing occurs within
    ``max_steps`` or the orbit escapes.
    """
    if not isinstance(section, Section):
        section = Section(tuple(map(float, section[0])), tuple(map(float, section[1])))
    fun = FieldFunction(X)
    p = (float(p[0]), float(p[1]))
    L = section.length
    if abs(section.side(p)) > 1e-9 * L * L:
        raise ValueError("start point is not on the section")
    vx, vy = fun(*p)
    dx, dy = section.direction
    sin_angle = (dx * vy - dy * vx) / (L * math.hypot(vx, vy) or math.inf)
    if abs(sin_angle) < transverse_tol:
        raise NotTransverseError("field is (nearly) tangent to the section at the start point")
    leave = 1.0 if sin_angle * direction > 0 else -1.0
    c = section.a if center is None else (float(center[0]), float(center[1]))
    scale = max(math.hypot(*p), 1e-300)
    stepper = Stepper(fun, p, direction=direction, rtol=tol, atol=tol * scale * 1e-20,
                      center=c, t_end=math.inf)
    for step in stepper.steps():
        g0, g1 = section.side(step.z0), section.side(step.z1)
        if g0 * leave < 0 and g1 * leave >= 0:
            frac, z = bisect_event(stepper, step, section.side, point_tol=precision * L)
            lam = section.parameter(z)
            if 0.0 <= lam <= 1.0:
                return Crossing(section.point(lam), lam, step.t0 + frac * step.h, stepper.stats.accepted)
        x1, y1 = step.z1
        if not (math.isfinite(x1) and math.isfinite(y1)) or math.hypot(x1, y1) > 1e8:
            return None
        if stepper.stats.accepted >= max_steps:
            return None
    return None
