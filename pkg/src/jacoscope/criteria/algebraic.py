"""Algebraic sufficient conditions: degree bound, common real linear factors, quasi-homogeneous leading parts."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.optimize import minimize

from ..config import RunConfig
from ..parser import print_poly
from ..polycore import PolyMap, Weights, default_names, gcd_homogeneous_bivariate, real_linear_factor_exists
from ..polycore import univariate as up
from .results import CriterionResult

DEGREE_BOUND = 4


def _planar(F: PolyMap, name: str) -> None:
    if F.n != 2:
        raise ValueError(f"{name} applies to planar maps only")


def degree_check(F: PolyMap) -> CriterionResult:
    """Cited shortcut: a planar map whose smaller component degree is at most 4 is injective."""
    _planar(F, "degree-bound")
    degs = [int(max(p.degree, 0)) for p in F]
    low = min(degs)
    cert = {"degrees": degs, "bound": DEGREE_BOUND, "applies": low <= DEGREE_BOUND}
    if low <= DEGREE_BOUND:
        return CriterionResult("degree-bound", "holds", "exact", cert, evidence="literature")
    cert["note"] = "fails to apply"
    return CriterionResult("degree-bound", "inconclusive", "exact", cert, evidence="literature")


def braun_check(F: PolyMap) -> CriterionResult:
    """Top forms of ``f f_x + g g_x`` and ``f f_y + g g_y`` without a common real linear factor."""
    _planar(F, "braun")
    f, g = F
    mu = f * f.partial(0) + g * g.partial(0)
    nu = f * f.partial(1) + g * g.partial(1)
    mt, nt = mu.top_form(), nu.top_form()
    names = default_names(2)
    cert = {"mu_top": print_poly(mt, names), "nu_top": print_poly(nt, names)}
    if mt.is_zero() and nt.is_zero():
        cert["note"] = "both forms vanish"
        return CriterionResult("braun", "inconclusive", "exact", cert, one_sided=True)
    if mt.is_zero() or nt.is_zero():
        h = nt if mt.is_zero() else mt
        h = h * Fraction(1, h.terms[0][1])
    else:
        h = gcd_homogeneous_bivariate(mt, nt)
    cert["gcd"] = print_poly(h, names)
    exists, direction = real_linear_factor_exists(h)
    if not exists:
        return CriterionResult("braun", "holds", "exact", cert, one_sided=True)
    cert["witness_direction"] = [str(direction[0]), str(direction[1])]
    return CriterionResult("braun", "fails", "exact", cert, one_sided=True)


# -- quasi-homogeneous leading parts --------------------------------------------


def weight_vectors(n: int, max_weight: int):
    """All ``s`` in ``{1..max_weight}^n`` with ``gcd(s) = 1``, in lexicographic order."""
    for s in product(range(1, max_weight + 1), repeat=n):
        if math.gcd(*s) == 1:
            yield Weights(s)


def leading_map(F: PolyMap, w: Weights) -> PolyMap:
    return PolyMap(tuple(p.leading_quasi(w) for p in F), F.names)


def _common_zero_planar(Fs: PolyMap) -> list[float] | None:
    """A nontrivial common real zero of a quasi-homogeneous pair, or ``None``.

    Weighted scaling moves any nonzero point to ``x = +-1`` or to
    ``(0, +-1)``, so it suffices to test those two slices exactly.
    """
    f, g = Fs
    if f.restrict(0, 0).is_zero() and g.restrict(0, 0).is_zero():
        return [0.0, 1.0]
    for sx in (1, -1):
        a = f.restrict(0, sx).to_univariate(1)
        b = g.restrict(0, sx).to_univariate(1)
        if not a and not b:
            return [float(sx), 0.0]
        h = up.gcd(a, b) if a and b else (a or b)
        if up.degree(h) >= 1:
            roots = up.real_roots(h)
            if roots:
                return [float(sx), float(roots[0])]
    return None


def _sphere_min(Fs: PolyMap, starts: int, seed: int) -> tuple[float, list[float]]:
    fns = [p.compile() for p in Fs]
    grads = [[p.partial(j).compile() for j in range(Fs.n)] for p in Fs]

    def value_grad(z):
        nz = float(np.linalg.norm(z))
        x = z / nz
        vals = [float(f(*x)) for f in fns]
        val = sum(v * v for v in vals)
        gx = np.array([sum(2 * vals[i] * float(grads[i][j](*x)) for i in range(Fs.n))
                       for j in range(Fs.n)])
        # chain rule through the normalization x = z / |z|
        gz = (gx - x * float(gx @ x)) / nz
        return val, gz

    rng = np.random.default_rng(seed)
    best, arg = math.inf, None
    for z0 in rng.normal(size=(starts, Fs.n)):
        r = minimize(value_grad, z0, jac=True, method="L-BFGS-B", options={"gtol": 1e-14, "ftol": 1e-16})
        if r.fun < best:
            best, arg = float(r.fun), r.x / np.linalg.norm(r.x)
    return best, [float(v) for v in arg]


def cima_check(F: PolyMap, max_weight: int = 6, config: RunConfig | None = None) -> CriterionResult:
    """Search weights whose leading quasi-homogeneous part has only the trivial zero.

    Planar maps are decided exactly per weight vector; for ``n > 2`` the
    minimum of ``|F_s|^2`` on the unit sphere is estimated by multi-start
    descent and compared with a numeric threshold.
    """
    cfg = config or RunConfig()
    if max_weight < 1:
        raise ValueError("max_weight must be at least 1")
    names = default_names(F.n)
    attempts = []
    exactness = "exact" if F.n == 2 else "numeric"
    for k, w in enumerate(weight_vectors(F.n, max_weight)):
        Fs = leading_map(F, w)
        entry = {"weights": list(w.s), "F_s": [print_poly(p, names) for p in Fs]}
        if F.n == 2:
            witness = _common_zero_planar(Fs)
            if witness is None:
                fn = [p.compile() for p in Fs]
                th = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
                lower = float(np.min(sum(np.asarray(f(np.cos(th), np.sin(th)), dtype=float) ** 2 for f in fn)))
                cert = {"weights": list(w.s), "F_s": entry["F_s"], "L_estimate": lower,
                        "method": "slice-gcd-sturm", "tried": attempts}
                return CriterionResult("cima", "holds", exactness, cert)
            entry["witness"] = witness
        else:
            m, arg = _sphere_min(Fs, cfg.cima_starts, cfg.seed + k)
            entry["sphere_min"] = m
            if m >= cfg.cima_threshold:
                cert = {"weights": list(w.s), "F_s": entry["F_s"], "L_estimate": m,
                        "method": "multistart-sphere", "tried": attempts}
                return CriterionResult("cima", "holds", exactness, cert)
            entry["witness"] = arg
        attempts.append(entry)
    return CriterionResult("cima", "fails", exactness, {"max_weight": max_weight, "tried": attempts})


# -- weighted scaling bound ------------------------------------------------------


def scaling_sandwich(s, y, r: Fraction) -> tuple[bool, bool, Fraction]:
    """Check ``r^(-2 min s) <= sum x_j^2 <= r^(-2 max s)`` for ``x_j = y_j / r^(s_j)``.

    ``y`` is a unit vector (exact rationals) and ``0 < r < 1``.  Returns the
    two inequality outcomes and the middle sum.
    """
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    if sum(Fraction(v) ** 2 for v in y) != 1:
        raise ValueError("y must be an exact unit vector")
    total = sum(Fraction(v) ** 2 / r ** (2 * si) for v, si in zip(y, s))
    lower = r ** (-2 * min(s))
    upper = r ** (-2 * max(s))
    return lower <= total, total <= upper, total


def rational_unit_vector(n: int, rng) -> tuple[Fraction, ...]:
    """An exact rational point on the unit sphere via inverse stereographic projection."""
    t = [Fraction(int(rng.integers(-50, 51)), int(rng.integers(1, 51))) for _ in range(n - 1)]
    s2 = sum(v * v for v in t)
    return tuple([2 * v / (1 + s2) for v in t] + [(s2 - 1) / (1 + s2)])


__all__ = ["braun_check", "cima_check", "degree_check", "leading_map", "rational_unit_vector",
           "scaling_sandwich", "weight_vectors"]
