"""Properness of ``I = f1^2 + ... + fn^2``.

Tier 1 is exact: a positive definite top form of ``I`` forces ``I`` to grow
like ``|x|^deg``.  Tier 2 is a numeric semi-decision that tracks the minimum
of ``I`` on circles (spheres) of radius ``2^k``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ..compactify import inverted_criterion
from ..config import RunConfig
from ..parser import print_poly
from ..polycore import Poly, PolyMap, default_names, real_linear_factor_exists
from ..polycore import univariate as up
from .results import PropernessReport, tier2_rule


def criterion_poly(F: PolyMap) -> Poly:
    total = Poly.zero(F.n)
    for p in F:
        total = total + p * p
    return total


def vanishing_directions(form: Poly) -> list[list[float]]:
    """Unit directions on which a bivariate form vanishes (rounded, sorted)."""
    dirs = []
    if form.is_zero():
        return dirs
    for t in up.real_roots(form.restrict(0, 1).to_univariate(1)):
        n = math.hypot(1.0, float(t))
        dirs.append([1.0 / n, float(t) / n])
    if form.eval_exact([0, 1]) == 0:
        dirs.append([0.0, 1.0])
    return sorted(dirs)


def tier1(F: PolyMap) -> dict:
    I = criterion_poly(F)
    top = I.top_form()
    names = default_names(F.n)
    out = {"I": print_poly(I, names), "I_top": print_poly(top, names), "degree": int(max(I.degree, 0))}
    if F.n != 2:
        out.update(positive_definite=None, note="exact leading-form test implemented for n = 2 only")
        return out
    if top.is_zero() or top.degree < 1:
        out.update(positive_definite=False, vanishing_directions=[])
        return out
    exists, _ = real_linear_factor_exists(top)
    out["positive_definite"] = not exists
    out["vanishing_directions"] = [] if not exists else vanishing_directions(top)
    return out


def _bounded_line(I: Poly, direction: tuple[Fraction, ...]) -> bool:
    t = Poly.variable(0, 1)
    return I.substitute([t * d for d in direction]).degree <= 0


def exact_not_proper(F: PolyMap, directions: list[list[float]]) -> dict | None:
    """Symbolic witness: a line through the origin on which ``I`` is constant."""
    I = criterion_poly(F)
    n = F.n
    candidates: list[tuple[Fraction, ...]] = []
    for k in range(n):
        candidates.append(tuple(Fraction(int(i == k)) for i in range(n)))
    for d in directions:
        candidates.append(tuple(Fraction(v).limit_denominator(1 << 16) for v in d))
    for d in candidates:
        if _bounded_line(I, d):
            value = I.substitute([Poly.variable(0, 1) * c for c in d]).constant_term()
            return {"kind": "line", "direction": [str(c) for c in d], "I_on_line": str(value),
                    "exact": True}
    return None


# -- tier 2 -------------------------------------------------------------------


def _circle_min(fn, R: float, samples: int, refine: int = 8) -> tuple[float, float]:
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    with np.errstate(all="ignore"):
        vals = np.asarray(fn(R * np.cos(theta), R * np.sin(theta)), dtype=float)
    vals = np.where(np.isfinite(vals), vals, np.inf)
    spacing = 2 * np.pi / samples
    best_val, best_th = float(vals.min()), float(theta[int(vals.argmin())])

    def along(t):
        with np.errstate(all="ignore"):
            return float(fn(R * math.cos(t), R * math.sin(t)))

    for i in np.argsort(vals, kind="stable")[:refine]:
        t0 = float(theta[i])
        r = minimize_scalar(along, bounds=(t0 - spacing, t0 + spacing), method="bounded",
                            options={"xatol": 1e-14})
        if r.fun < best_val:
            best_val, best_th = float(r.fun), float(r.x)
    return best_val, math.remainder(best_th, 2 * math.pi)


def _sphere_min(F: PolyMap, R: float, samples: int, seed: int, refine: int = 4) -> tuple[float, list[float]]:
    fns = [p.compile() for p in F]
    grads = [[p.partial(j).compile() for j in range(F.n)] for p in F]
    n = F.n
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(samples, n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    with np.errstate(all="ignore"):
        cols = [R * pts[:, i] for i in range(n)]
        vals = sum(np.asarray(f(*cols), dtype=float) ** 2 for f in fns)
    vals = np.where(np.isfinite(vals), vals, np.inf)

    def value_grad(z):
        nz = float(np.linalg.norm(z))
        x = R * z / nz
        comps = [float(f(*x)) for f in fns]
        gx = np.array([sum(2 * comps[i] * float(grads[i][j](*x)) for i in range(n)) for j in range(n)])
        # chain rule through x = R z / |z|
        e = z / nz
        return sum(c * c for c in comps), R * (gx - e * float(gx @ e)) / nz

    order = np.argsort(vals, kind="stable")[:refine]
    best, arg = float(vals[order[0]]), pts[order[0]]
    for i in order:
        r = minimize(value_grad, pts[i], jac=True, method="L-BFGS-B", options={"gtol": 1e-12, "ftol": 1e-15})
        if np.isfinite(r.fun) and r.fun < best:
            best, arg = float(r.fun), r.x / np.linalg.norm(r.x)
    return best, [float(v) for v in arg]


def circle_minima(F: PolyMap, radii: list[float], samples: int = 4096, seed: int = 0):
    """Per-radius minimum of ``I`` and the minimizing direction."""
    minima, args = [], []
    if F.n == 2:
        fn = criterion_poly(F).compile()
        for R in radii:
            m, th = _circle_min(fn, R, samples)
            minima.append(m)
            args.append([math.cos(th), math.sin(th)])
    else:
        for k, R in enumerate(radii):
            m, a = _sphere_min(F, R, samples, seed + k)
            minima.append(m)
            args.append(a)
    return minima, args


def _witness_curve(radii, minima, args, window: int) -> dict:
    tail = list(zip(radii, minima, args))[-window:]
    return {"kind": "sampled-minimizers", "exact": False,
            "points": [[R * a for a in arg] for R, _, arg in tail],
            "values": [m for _, m, _ in tail]}


def properness_check(F: PolyMap, config: RunConfig | None = None, run_tier2: bool | None = None
                     ) -> PropernessReport:
    """Two-tier properness report for a validated map.

    Tier 2 runs whenever tier 1 does not certify properness (and also when
    ``run_tier2`` is true).  A line through the origin on which ``I`` is
    constant yields an exact failure.
    """
    cfg = config or RunConfig()
    t1 = tier1(F)
    thresholds = {"threshold": cfg.growth_threshold, "ratio": cfg.growth_ratio,
                  "plateau": cfg.plateau_tol, "window": cfg.growth_window}
    if t1.get("positive_definite"):
        status, exactness = "holds", "exact"
    else:
        status, exactness = "inconclusive", "numeric"
    radii, minima, args, t2 = [], [], [], None
    witness = None
    if status != "holds" or run_tier2:
        radii = [float(2**k) for k in range(cfg.properness_radii + 1)]
        minima, args = circle_minima(F, radii, cfg.properness_samples, cfg.seed)
        t2 = tier2_rule(minima, **thresholds)
        if status != "holds":
            status = t2
            if t2 == "fails":
                witness = _witness_curve(radii, minima, args, cfg.growth_window)
    if status != "holds" or exactness != "exact":
        exact = exact_not_proper(F, t1.get("vanishing_directions", []))
        if exact is not None:
            status, exactness, witness = "fails", "exact", exact
    return PropernessReport(t1, radii, minima, args, t2, witness, status, exactness, thresholds)


# -- the same question in inverted coordinates ---------------------------------


def inverted_maxima(F: PolyMap, ks, samples: int = 4096) -> list[float]:
    """``max`` of the inverted first integral on circles ``|(u, v)| = 2^-k``.

    Uses the cleared form ``num/den`` so no reciprocal of ``I`` is taken.
    """
    num, den = inverted_criterion(F)
    fn_num, fn_den = num.compile(), den.compile()

    def neg_ratio(u, v):
        return -(fn_num(u, v) / fn_den(u, v))

    out = []
    for k in ks:
        m, _ = _circle_min(neg_ratio, 2.0 ** (-k), samples)
        out.append(-m)
    return out


def inverted_verdict(maxima: list[float], threshold: float = 1e-6) -> str:
    return "holds" if maxima and maxima[-1] < threshold and all(
        b <= a for a, b in zip(maxima[-5:], maxima[-4:])) else "inconclusive"
