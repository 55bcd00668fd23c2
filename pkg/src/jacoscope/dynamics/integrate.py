"""Adaptive Dormand-Prince 5(4) integration of planar polynomial fields.

The state is a pair of Python floats; for two-dimensional systems this is
markedly faster than small numpy arrays.  Steps are additionally limited so
that the polar angle around a declared center changes by at most
``max_angle`` per step, which keeps winding bookkeeping unambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from ..compactify import PlanarField

TERMINATIONS = ("budget", "escaped", "converged-to-point", "closed")

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

ORDER = 5


class FieldFunction:
    """Float evaluator ``(x, y) -> (p, q)`` for a :class:`PlanarField`."""

    def __init__(self, X: PlanarField):
        self.field = X
        self._p = X.p.compile()
        self._q = X.q.compile()

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        try:
            return self._p(x, y), self._q(x, y)
        except OverflowError:
            return math.inf, math.inf

    def on_arrays(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        zero = np.zeros_like(x, dtype=float)
        return self._p(x, y) + zero, self._q(x, y) + zero


def as_function(field_or_fn) -> Callable[[float, float], tuple[float, float]]:
    if isinstance(field_or_fn, PlanarField):
        return FieldFunction(field_or_fn)
    return field_or_fn


def dp_step(fun, x: float, y: float, h: float, k1: tuple[float, float]):
    """One Dormand-Prince step; returns ``(x1, y1, k7, err_x, err_y)``."""
    k1x, k1y = k1
    k2x, k2y = fun(x + h * A21 * k1x, y + h * A21 * k1y)
    k3x, k3y = fun(x + h * (A31 * k1x + A32 * k2x), y + h * (A31 * k1y + A32 * k2y))
    k4x, k4y = fun(x + h * (A41 * k1x + A42 * k2x + A43 * k3x),
                   y + h * (A41 * k1y + A42 * k2y + A43 * k3y))
    k5x, k5y = fun(x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x),
                   y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y))
    k6x, k6y = fun(x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
                   y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y))
    x1 = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
    y1 = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
    k7 = fun(x1, y1)
    ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7[0])
    ey = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7[1])
    return x1, y1, k7, ex, ey


def angle_between(ax: float, ay: float, bx: float, by: float) -> float:
    """Signed angle from vector a to vector b in ``(-pi, pi]``."""
    return math.atan2(ax * by - ay * bx, ax * bx + ay * by)


@dataclass
class Step:
    t0: float
    z0: tuple[float, float]
    k0: tuple[float, float]
    h: float
    t1: float
    z1: tuple[float, float]
    k1: tuple[float, float]
    dtheta: float


@dataclass
class StepStats:
    accepted: int = 0
    rejected_error: int = 0
    rejected_angle: int = 0
    evaluations: int = 0


@dataclass
class Stepper:
    """Adaptive step generator shared by the trace, section and probe drivers."""

    fun: Callable
    z0: tuple[float, float]
    direction: int = 1
    rtol: float = 1e-9
    atol: float = 1e-9
    center: tuple[float, float] | None = (0.0, 0.0)
    max_angle: float = math.pi / 4
    t_end: float = math.inf
    h0: float | None = None
    stagnation_steps: int = 50
    stats: StepStats = field(default_factory=StepStats)
    underflow: bool = False
    stalled: bool = False

    def _initial_step(self, k0) -> float:
        x, y = self.z0
        scale = self.atol + self.rtol * math.hypot(x, y)
        speed = math.hypot(*k0)
        if speed == 0.0:
            return 0.0
        h = 0.01 * max(math.hypot(x, y), scale) / speed
        return min(h, abs(self.t_end)) if math.isfinite(self.t_end) else h

    def steps(self) -> Iterator[Step]:
        fun = self.fun
        x, y = self.z0
        k = fun(x, y)
        self.stats.evaluations += 1
        # elapsed time as an unevaluated sum t + t_lo; a single orbit of a
        # compactified field can span time scales far beyond float precision
        t, t_lo = 0.0, 0.0
        h = abs(self.h0) if self.h0 else self._initial_step(k)
        if h == 0.0:
            self.stalled = True
            return
        sgn = 1.0 if self.direction >= 0 else -1.0
        t_end = abs(self.t_end)
        cx, cy = self.center if self.center is not None else (0.0, 0.0)
        stagnant = 0
        while (t + t_lo) < t_end:
            h = min(h, (t_end - t) - t_lo)
            if h < 1e-300:
                self.underflow = True
                return
            x1, y1, k1, ex, ey = dp_step(fun, x, y, sgn * h, k)
            self.stats.evaluations += 6
            scale = self.atol + self.rtol * max(math.hypot(x, y), math.hypot(x1, y1))
            err = math.hypot(ex, ey) / scale
            if not math.isfinite(err):
                self.stats.rejected_error += 1
                h *= 0.2
                continue
            if err > 1.0:
                self.stats.rejected_error += 1
                h *= max(0.2, 0.9 * err ** (-1 / ORDER))
                continue
            dtheta = 0.0
            if self.center is not None:
                dtheta = angle_between(x - cx, y - cy, x1 - cx, y1 - cy)
                if abs(dtheta) > self.max_angle:
                    self.stats.rejected_angle += 1
                    h *= 0.5
                    continue
            self.stats.accepted += 1
            t_new = t + h
            t_lo += (t - t_new) + h if abs(t) >= h else (h - t_new) + t
            step = Step(sgn * t, (x, y), k, sgn * h, sgn * t_new, (x1, y1), k1, dtheta)
            moved = abs(x1 - x) + abs(y1 - y)
            t = t_new
            x, y, k = x1, y1, k1
            yield step
            if k[0] == 0.0 and k[1] == 0.0:
                self.stalled = True
                return
            stagnant = stagnant + 1 if moved <= 1e-16 * (abs(x) + abs(y)) else 0
            if stagnant >= self.stagnation_steps:
                self.stalled = True
                return
            factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** (-1 / ORDER)))
            h *= factor

    def substep(self, step: Step, frac: float) -> tuple[float, float]:
        """State reached from ``step.z0`` after ``frac * step.h`` (one RK step)."""
        if frac <= 0.0:
            return step.z0
        if frac >= 1.0:
            return step.z1
        x1, y1, *_ = dp_step(self.fun, step.z0[0], step.z0[1], frac * step.h, step.k0)
        self.stats.evaluations += 6
        return (x1, y1)


def bisect_event(stepper: Stepper, step: Step, g: Callable[[tuple[float, float]], float],
                 point_tol: float = 1e-10, max_iter: int = 200) -> tuple[float, tuple[float, float]]:
    """Locate a sign change of ``g`` inside ``step`` by bisection on the sub-step length.

    Returns ``(fraction, point)``; stops once the bracketing points are within
    ``point_tol`` of each other.
    """
    lo, hi = 0.0, 1.0
    z_lo, z_hi = step.z0, step.z1
    g_lo = g(z_lo)
    for _ in range(max_iter):
        if math.hypot(z_hi[0] - z_lo[0], z_hi[1] - z_lo[1]) <= point_tol:
            break
        mid = 0.5 * (lo + hi)
        z_mid = stepper.substep(step, mid)
        g_mid = g(z_mid)
        if g_mid == 0.0:
            return mid, z_mid
        if (g_mid > 0) == (g_lo > 0):
            lo, z_lo, g_lo = mid, z_mid, g_mid
        else:
            hi, z_hi = mid, z_mid
    return 0.5 * (lo + hi), (0.5 * (z_lo[0] + z_hi[0]), 0.5 * (z_lo[1] + z_hi[1]))


@dataclass
class OrbitTrace:
    t: np.ndarray
    points: np.ndarray  # shape (N, 2)
    termination: str
    stats: dict

    @property
    def samples(self) -> list[tuple[float, tuple[float, float]]]:
        return [(float(t), (float(p[0]), float(p[1]))) for t, p in zip(self.t, self.points)]

    @property
    def end(self) -> tuple[float, float]:
        return float(self.points[-1, 0]), float(self.points[-1, 1])

    def __len__(self) -> int:
        return len(self.t)


def integrate(field: PlanarField | Callable, p0, t_end: float, tol: float = 1e-9, *,
              rtol: float | None = None, atol: float | None = None,
              center=(0.0, 0.0), max_angle: float = math.pi / 4,
              max_steps: int = 200_000, escape_radius: float = 1e8,
              detect_closure: bool = True, closure_tol: float = 1e-6,
              stop: Callable | None = None) -> OrbitTrace:
    """Integrate from ``p0`` for time ``t_end`` (negative for backward time).

    Local error per step is held below ``atol + rtol*|state|`` (both default
    to ``tol``, i.e. ``tol*(1+|state|)``).  Termination is one of
    ``budget`` (time or step budget used up), ``escaped`` (state left
    ``escape_radius`` or overflowed), ``converged-to-point`` (the field
    vanished or the step size underflowed) and ``closed`` (the orbit came
    back to ``p0`` after one full turn around ``center``, within
    ``closure_tol`` relative to the distance from the center).

    ``stop(t, point, winding)`` may end the run early by returning a
    termination label.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    fun = as_function(field)
    x0, y0 = float(p0[0]), float(p0[1])
    stepper = Stepper(fun, (x0, y0), direction=1 if t_end >= 0 else -1,
                      rtol=tol if rtol is None else rtol, atol=tol if atol is None else atol,
                      center=None if center is None else (float(center[0]), float(center[1])),
                      max_angle=max_angle, t_end=abs(t_end))
    ts = [0.0]
    pts = [(x0, y0)]
    winding = 0.0
    termination = "budget"
    closure_info = {}
    cx, cy = stepper.center or (0.0, 0.0)
    r0 = math.hypot(x0 - cx, y0 - cy)
    closure_scale = max(r0, 1e-300)
    target = 2 * math.pi
    for step in stepper.steps():
        new_winding = winding + step.dtheta
        if detect_closure and center is not None and abs(new_winding) >= target > abs(winding):
            sign = 1.0 if new_winding > 0 else -1.0
            ux, uy = (x0 - cx) / closure_scale, (y0 - cy) / closure_scale

            def g(z, _w=winding, _z0=step.z0):
                return abs(_w + angle_between(_z0[0] - cx, _z0[1] - cy, z[0] - cx, z[1] - cy)) - target

            frac, zc = bisect_event(stepper, step, g, point_tol=1e-12 * closure_scale)
            dist = math.hypot(zc[0] - x0, zc[1] - y0)
            closure_info = {"first_return_distance": dist / closure_scale,
                            "first_return_time": step.t0 + frac * step.h}
            target += 2 * math.pi
            if dist <= closure_tol * closure_scale:
                ts.append(step.t0 + frac * step.h)
                pts.append(zc)
                winding = sign * (target - 2 * math.pi)
                termination = "closed"
                break
            del ux, uy
        winding = new_winding
        ts.append(step.t1)
        pts.append(step.z1)
        x1, y1 = step.z1
        if not (math.isfinite(x1) and math.isfinite(y1)) or math.hypot(x1, y1) > escape_radius:
            termination = "escaped"
            break
        if stop is not None:
            label = stop(step.t1, step.z1, winding)
            if label:
                termination = label
                break
        if stepper.stats.accepted >= max_steps:
            termination = "budget"
            break
    else:
        if stepper.underflow or stepper.stalled:
            termination = "converged-to-point"
        elif detect_closure and center is not None and len(pts) > 1:
            x1, y1 = pts[-1]
            if (abs(abs(winding) - 2 * math.pi) < 1e-6
                    and math.hypot(x1 - x0, y1 - y0) <= closure_tol * closure_scale):
                termination = "closed"
    stats = {
        "accepted": stepper.stats.accepted,
        "rejected_error": stepper.stats.rejected_error,
        "rejected_angle": stepper.stats.rejected_angle,
        "evaluations": stepper.stats.evaluations,
        "winding": winding,
        **closure_info,
    }
    return OrbitTrace(np.array(ts), np.array(pts, dtype=float), termination, stats)


def winding_angle(trace: OrbitTrace | np.ndarray, center=(0.0, 0.0), min_distance: float = 1e-12) -> float:
    """Unwrapped sum of polar-angle increments of the trace around ``center``."""
    pts = trace.points if isinstance(trace, OrbitTrace) else np.asarray(trace, dtype=float)
    rel = pts - np.asarray(center, dtype=float)
    if np.min(np.hypot(rel[:, 0], rel[:, 1])) < min_distance:
        raise ValueError("trace passes through the center")
    a, b = rel[:-1], rel[1:]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = a[:, 0] * b[:, 0] + a[:, 1] * b[:, 1]
    return float(np.sum(np.arctan2(cross, dot)))
