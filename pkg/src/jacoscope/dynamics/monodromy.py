"""Numerical evidence that a singular point is (or is not) monodromic."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from ..compactify import PlanarField
from .integrate import FieldFunction, Stepper, angle_between, bisect_event

VERDICTS = ("Monodromic", "NotMonodromic", "Inconclusive")


@dataclass(frozen=True)
class ProbeConfig:
    radii: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    angles: int = 8
    tol: float = 1e-8
    max_steps: int = 100_000
    escape_factor: float = 10.0
    collapse_ratio: float = 1e-24
    closure_tol: float = 1e-6
    zero_tol: float = 1e-10


@dataclass
class ProbeRecord:
    start_radius: float
    start_angle: float
    direction: int
    outcome: str  # turned, escaped, converged, budget
    winding: float
    returned_to_section: bool
    escaped: bool
    return_distance: float | None
    min_radius_ratio: float
    max_radius_ratio: float
    steps: int
    exit_angle: float | None = None

    def key(self):
        return (self.start_radius, self.start_angle, self.direction)


@dataclass
class MonodromyReport:
    center: tuple[float, float]
    verdict: str
    center_evidence: bool
    probes: list[ProbeRecord]
    escape_directions: list[float]
    config: dict
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "center": list(self.center),
            "verdict": self.verdict,
            "center_evidence": self.center_evidence,
            "escape_directions": self.escape_directions,
            "probes": [asdict(p) for p in self.probes],
            "config": self.config,
            "notes": self.notes,
        }


def _check_center(X: PlanarField, center, zero_tol: float) -> None:
    point = [Fraction(c) for c in center]
    p, q = X.eval_exact(point)
    if max(abs(p), abs(q)) > zero_tol:
        raise ValueError(f"center {tuple(center)} is not a zero of the field "
                         f"(|field| = {float(max(abs(p), abs(q))):.3e})")


def run_probe(fun, center, r: float, theta: float, direction: int, outer: float,
              cfg: ProbeConfig) -> ProbeRecord:
    """Follow one orbit until it turns once, escapes, collapses or runs out of budget."""
    cx, cy = center
    z0 = (cx + r * math.cos(theta), cy + r * math.sin(theta))
    # relative error control: orbits may pass many decades closer to the center
    stepper = Stepper(fun, z0, direction=direction, rtol=cfg.tol, atol=cfg.tol * r * 1e-20,
                      center=center, t_end=math.inf)
    winding = 0.0
    rmin = rmax = r
    outcome = "budget"
    dist = None
    exit_angle = None
    for step in stepper.steps():
        new_winding = winding + step.dtheta
        if abs(new_winding) >= 2 * math.pi:
            def g(z, _w=winding, _z=step.z0):
                return abs(_w + angle_between(_z[0] - cx, _z[1] - cy, z[0] - cx, z[1] - cy)) - 2 * math.pi

            _, zc = bisect_event(stepper, step, g, point_tol=1e-12 * r)
            dist = math.hypot(zc[0] - z0[0], zc[1] - z0[1]) / r
            winding = math.copysign(2 * math.pi, new_winding)
            outcome = "turned"
            break
        winding = new_winding
        x1, y1 = step.z1
        rad = math.hypot(x1 - cx, y1 - cy)
        rmin, rmax = min(rmin, rad), max(rmax, rad)
        if not math.isfinite(rad) or rad > outer:
            outcome = "escaped"
            exit_angle = math.atan2(y1 - cy, x1 - cx)
            break
        if rad < cfg.collapse_ratio * r:
            outcome = "converged"
            break
        if stepper.stats.accepted >= cfg.max_steps:
            break
    else:
        if stepper.underflow or stepper.stalled:
            outcome = "converged"
    return ProbeRecord(
        start_radius=r, start_angle=theta, direction=direction, outcome=outcome,
        winding=winding, returned_to_section=outcome == "turned",
        escaped=outcome == "escaped", return_distance=dist,
        min_radius_ratio=rmin / r, max_radius_ratio=rmax / r,
        steps=stepper.stats.accepted, exit_angle=exit_angle,
    )


def classify(probes: list[ProbeRecord]) -> str:
    if probes and all(p.outcome == "turned" for p in probes):
        return "Monodromic"
    if any(p.outcome in ("escaped", "converged") for p in probes):
        return "NotMonodromic"
    return "Inconclusive"


def monodromy_probe(X: PlanarField, center=(0.0, 0.0), radii=None, budget: int | None = None,
                    config: ProbeConfig | None = None) -> MonodromyReport:
    """Launch probes around ``center`` in both time directions and classify.

    A probe *turns* when its polar angle about the center accumulates a full
    turn; the first crossing of the start ray is then located by bisection.
    It *escapes* when it leaves ``escape_factor * max(radii)`` and
    *converges* when it comes within ``collapse_ratio * r`` of the center
    (or stalls).  Orbits of degenerate monodromic points may swing over many
    decades of radius within one turn, so there is no tight inner wall.

    The verdict is ``Monodromic`` when every probe turns, ``NotMonodromic``
    when at least one escapes or converges, and ``Inconclusive`` otherwise.
    ``center_evidence`` additionally requires every first return to land
    within ``closure_tol`` (relative to the start radius) of the start
    point, which is what a center predicts.

    Probe radii are heuristic; nothing guarantees they lie inside the
    neighborhood where the local picture is valid.
    """
    cfg = config or ProbeConfig()
    if radii is not None:
        cfg = ProbeConfig(**{**asdict(cfg), "radii": tuple(float(r) for r in radii)})
    if budget is not None:
        cfg = ProbeConfig(**{**asdict(cfg), "max_steps": int(budget)})
    if not cfg.radii or min(cfg.radii) <= 0:
        raise ValueError("probe radii must be positive")
    center = (float(center[0]), float(center[1]))
    _check_center(X, center, cfg.zero_tol)
    fun = FieldFunction(X)
    outer = cfg.escape_factor * max(cfg.radii)
    probes = []
    for r in sorted(cfg.radii, reverse=True):
        for j in range(cfg.angles):
            theta = 2 * math.pi * j / cfg.angles
            for direction in (1, -1):
                probes.append(run_probe(fun, center, r, theta, direction, outer, cfg))
    probes.sort(key=ProbeRecord.key)
    verdict = classify(probes)
    center_evidence = verdict == "Monodromic" and all(
        p.return_distance is not None and p.return_distance <= cfg.closure_tol for p in probes)
    escapes = sorted({round(p.exit_angle, 2) for p in probes if p.exit_angle is not None})
    notes = ["probe radii are heuristic; the size of the neighborhood in which the local "
             "picture holds is not known a priori"]
    cfg_dict = asdict(cfg)
    cfg_dict["radii"] = list(cfg.radii)
    return MonodromyReport(center, verdict, center_evidence, probes, escapes, cfg_dict, notes)
