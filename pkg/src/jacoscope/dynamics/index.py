"""Poincare index of a planar field along a closed curve."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..compactify import PlanarField
from .integrate import FieldFunction


class ZeroOnCurveError(ValueError):
    pass


class IndexAccumulationError(ValueError):
    pass


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("circle radius must be positive")

    def at(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        a = 2 * np.pi * s
        return self.center[0] + self.radius * np.cos(a), self.center[1] + self.radius * np.sin(a)


@dataclass(frozen=True)
class Polyline:
    """Closed polyline; the last vertex connects back to the first."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("a closed polyline needs at least three vertices")

    def at(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        v = np.asarray(self.vertices + (self.vertices[0],), dtype=float)
        seg = np.hypot(*np.diff(v, axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)]) / seg.sum()
        x = np.interp(s, cum, v[:, 0])
        y = np.interp(s, cum, v[:, 1])
        return x, y


@dataclass
class IndexRecord:
    index: int
    total_angle: float
    samples: int
    refinement_rounds: int
    min_field_norm: float
    max_field_norm: float
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "total_angle": self.total_angle,
            "samples": self.samples,
            "refinement_rounds": self.refinement_rounds,
            "min_field_norm": self.min_field_norm,
            "max_field_norm": self.max_field_norm,
            "notes": self.notes,
        }


def as_curve(curve) -> Circle | Polyline:
    if isinstance(curve, (Circle, Polyline)):
        return curve
    if isinstance(curve, dict) and "radius" in curve:
        return Circle(tuple(curve.get("center", (0.0, 0.0))), float(curve["radius"]))
    return Polyline(tuple((float(a), float(b)) for a, b in curve))


def _angles(fun: Callable, curve, s: np.ndarray):
    x, y = curve.at(s)
    p, q = fun.on_arrays(x, y)
    return np.arctan2(q, p), np.hypot(p, q)


def index_record(X: PlanarField | FieldFunction, curve, initial_samples: int = 64,
                 max_samples: int = 1 << 20, max_increment: float = math.pi / 4,
                 zero_tol: float = 1e-8, integer_tol: float = 1e-3) -> IndexRecord:
    """Winding number of the field direction along ``curve``.

    Sampling starts uniform and bisects every parameter interval across which
    the field direction turns by more than ``max_increment``, until no such
    interval remains or ``max_samples`` is reached.  A sampled field norm below
    ``zero_tol`` times the largest sampled norm is treated as a zero on the
    curve.
    """
    fun = X if isinstance(X, FieldFunction) else FieldFunction(X)
    curve = as_curve(curve)
    s = np.linspace(0.0, 1.0, initial_samples + 1)
    ang, norm = _angles(fun, curve, s)
    rounds = 0
    while True:
        peak = float(norm.max())
        if not np.all(np.isfinite(norm)):
            raise ZeroOnCurveError("field is not finite on the curve")
        if peak == 0.0 or float(norm.min()) < zero_tol * peak:
            k = int(np.argmin(norm))
            x, y = curve.at(s[k:k + 1])
            raise ZeroOnCurveError(f"field (nearly) vanishes on the curve near ({x[0]:.6g}, {y[0]:.6g})")
        inc = np.angle(np.exp(1j * np.diff(ang)))
        bad = np.abs(inc) > max_increment
        if not bad.any():
            break
        if len(s) + int(bad.sum()) > max_samples:
            raise IndexAccumulationError(f"sampling budget of {max_samples} points exhausted")
        mids = 0.5 * (s[:-1][bad] + s[1:][bad])
        mang, mnorm = _angles(fun, curve, mids)
        order = np.argsort(np.concatenate([s, mids]), kind="stable")
        s = np.concatenate([s, mids])[order]
        ang = np.concatenate([ang, mang])[order]
        norm = np.concatenate([norm, mnorm])[order]
        rounds += 1
    total = float(np.sum(inc))
    k = round(total / (2 * math.pi))
    if abs(total - 2 * math.pi * k) > integer_tol:
        raise IndexAccumulationError(f"accumulated angle {total!r} is not within {integer_tol} of 2*pi*k")
    return IndexRecord(int(k), total, len(s), rounds, float(norm.min()), float(norm.max()))


def index_on_curve(X: PlanarField, curve, **kwargs) -> int:
    """Integer index of the field along a closed curve (circle or polyline)."""
    return index_record(X, curve, **kwargs).index


def polyline_from_trace(points: Sequence[Sequence[float]]) -> Polyline:
    """Closed polyline through the points of an orbit trace (dropping a repeated end point)."""
    pts = [tuple(map(float, p)) for p in points]
    if len(pts) > 1 and math.dist(pts[0], pts[-1]) < 1e-12:
        pts.pop()
    return Polyline(tuple(pts))
