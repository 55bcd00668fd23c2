"""Hypothesis check: translate ``F(0)`` to the origin and test that ``det DF`` never vanishes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..config import RunConfig
from ..parser import print_poly
from ..polycore import Poly, PolyMap, default_names, jacobian_det
from ..polycore import univariate as up
from .results import CriterionResult


@dataclass(frozen=True)
class Validation:
    map: PolyMap
    shift: tuple[Fraction, ...]
    det: Poly
    result: CriterionResult

    @property
    def normalization(self) -> dict:
        return {
            "translation": [str(c) for c in self.shift],
            "applied": any(c != 0 for c in self.shift),
        }


def _q(v: Fraction) -> str:
    return str(v)


# -- exact shortcuts ----------------------------------------------------------


def _univariate_case(det: Poly, names) -> CriterionResult | None:
    used = det.variables_used()
    if len(used) != 1:
        return None
    var = used[0]
    coeffs = det.to_univariate(var)
    roots = up.isolate_real_roots(coeffs)
    cert = {"det": print_poly(det, names), "method": "sturm", "variable": names[var],
            "real_roots": len(roots)}
    if not roots:
        return CriterionResult("jacobian", "holds", "exact", cert)
    lo, hi = roots[0]
    point = [0.0] * det.nvars
    point[var] = float((lo + hi) / 2)
    cert.update(witness=point, isolating_interval=[_q(lo), _q(hi)])
    return CriterionResult("jacobian", "fails", "exact", cert)


def _even_definite_case(det: Poly, names) -> CriterionResult | None:
    if det.constant_term() == 0:
        return None
    signs = {c > 0 for _, c in det.terms}
    if len(signs) != 1 or any(e % 2 for m, _ in det.terms for e in m):
        return None
    sign = 1 if signs.pop() else -1
    cert = {"det": print_poly(det, names), "method": "even-monomials-same-sign", "sign": sign}
    return CriterionResult("jacobian", "holds", "exact", cert)


# -- numeric search with exact confirmation ------------------------------------


def _grid_axes(n: int, B: Fraction, per_axis: int) -> list[list[Fraction]]:
    step = 2 * B / (per_axis - 1)
    return [[-B + i * step for i in range(per_axis)] for _ in range(n)]


def _sign_change_search(det: Poly, B: Fraction, per_axis: int, names) -> CriterionResult | None:
    n = det.nvars
    axes = _grid_axes(n, B, per_axis)
    mesh = np.meshgrid(*[np.array([float(v) for v in ax]) for ax in axes], indexing="ij")
    vals = np.asarray(det.compile()(*mesh), dtype=float) + np.zeros(mesh[0].shape)
    # an exact zero at a grid point
    near = np.argwhere(np.abs(vals) <= 1e-12 * max(1.0, float(np.max(np.abs(vals)))))
    for idx in near[:16]:
        pt = [axes[k][i] for k, i in enumerate(idx)]
        if det.eval_exact(pt) == 0:
            cert = {"det": print_poly(det, names), "method": "grid-exact-zero",
                    "witness": [float(v) for v in pt], "witness_exact": [_q(v) for v in pt]}
            return CriterionResult("jacobian", "fails", "exact", cert)
    sgn = np.sign(vals)
    for axis in range(n):
        a = np.take(sgn, range(per_axis - 1), axis=axis)
        b = np.take(sgn, range(1, per_axis), axis=axis)
        hits = np.argwhere(a * b < 0)
        for idx in hits[:16]:
            p = [axes[k][i] for k, i in enumerate(idx)]
            q = list(p)
            q[axis] = axes[axis][idx[axis] + 1]
            dp, dq = det.eval_exact(p), det.eval_exact(q)
            if dp * dq >= 0:
                continue
            lo, hi = p[axis], q[axis]
            for _ in range(60):
                mid = (lo + hi) / 2
                pt = list(p)
                pt[axis] = mid
                dm = det.eval_exact(pt)
                if dm == 0:
                    lo = hi = mid
                    break
                if (dm > 0) == (dp > 0):
                    lo = mid
                else:
                    hi = mid
            w = list(p)
            w[axis] = (lo + hi) / 2
            cert = {"det": print_poly(det, names), "method": "sign-change",
                    "positive_side": [_q(v) for v in (p if dp > 0 else q)],
                    "negative_side": [_q(v) for v in (q if dp > 0 else p)],
                    "witness": [float(v) for v in w]}
            return CriterionResult("jacobian", "fails", "exact", cert)
    return None


def _interval_pow(lo: Fraction, hi: Fraction, e: int) -> tuple[Fraction, Fraction]:
    if e == 0:
        return Fraction(1), Fraction(1)
    a, b = lo**e, hi**e
    if e % 2:
        return a, b
    if lo >= 0:
        return a, b
    if hi <= 0:
        return b, a
    return Fraction(0), max(a, b)


def interval_eval(p: Poly, box: list[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    """Natural interval extension of ``p`` over ``box`` (exact rational endpoints)."""
    lo_sum = hi_sum = Fraction(0)
    for m, c in p.terms:
        lo, hi = Fraction(c), Fraction(c)
        for (a, b), e in zip(box, m):
            if e == 0:
                continue
            pa, pb = _interval_pow(a, b, e)
            prods = (lo * pa, lo * pb, hi * pa, hi * pb)
            lo, hi = min(prods), max(prods)
        lo_sum += lo
        hi_sum += hi
    return lo_sum, hi_sum


def _interval_certify(det: Poly, B: Fraction, budget: int, names) -> CriterionResult:
    stack = [[(-B, B)] * det.nvars]
    processed = 0
    sign = 0
    leaves = 0
    while stack:
        box = stack.pop()
        processed += 1
        if processed > budget:
            cert = {"det": print_poly(det, names), "method": "interval", "box": [_q(-B), _q(B)],
                    "boxes_processed": processed - 1, "note": "box budget exhausted"}
            return CriterionResult("jacobian", "inconclusive", "numeric", cert)
        lo, hi = interval_eval(det, box)
        if lo > 0 or hi < 0:
            s = 1 if lo > 0 else -1
            if sign and s != sign:
                cert = {"det": print_poly(det, names), "method": "interval-opposite-signs",
                        "box": [_q(-B), _q(B)]}
                return CriterionResult("jacobian", "fails", "exact", cert)
            sign = s
            leaves += 1
            continue
        k = max(range(len(box)), key=lambda i: box[i][1] - box[i][0])
        a, b = box[k]
        mid = (a + b) / 2
        left, right = list(box), list(box)
        left[k], right[k] = (a, mid), (mid, b)
        stack.extend((right, left))
    cert = {"det": print_poly(det, names), "method": "interval", "holds_on_box": [_q(-B), _q(B)],
            "sign": sign, "boxes": leaves,
            "note": "sign-definite on the box only; global sign not certified"}
    return CriterionResult("jacobian", "inconclusive", "numeric", cert)


def validate(F: PolyMap, config: RunConfig | None = None) -> Validation:
    """Normalize ``F`` so that ``F(0) = 0`` and check the Jacobian hypothesis.

    Exact outcomes: a nonzero constant determinant, a univariate determinant
    decided by Sturm counting, an even sign-definite determinant, or a real
    zero certified by an exact sign change.  Failing those, the determinant
    is bounded away from zero on ``[-B, B]^n`` by exact interval arithmetic,
    which is reported as inconclusive since it says nothing outside the box.
    """
    cfg = config or RunConfig()
    if F.is_zero():
        raise ValueError("the zero map has no invertible Jacobian anywhere")
    G, shift = F.translated_to_origin()
    det = jacobian_det(G)
    names = default_names(F.n)
    if det.is_zero():
        cert = {"det": "0", "method": "identically-zero", "witness": [0.0] * F.n}
        res = CriterionResult("jacobian", "fails", "exact", cert)
    elif det.is_constant():
        res = CriterionResult("jacobian", "holds", "exact",
                              {"det": print_poly(det, names), "method": "constant"})
    else:
        res = _univariate_case(det, names) or _even_definite_case(det, names)
        if res is None:
            B = Fraction(cfg.jacobian_box).limit_denominator(1 << 20)
            per_axis = cfg.jacobian_grid if F.n <= 2 else max(3, int(round(200_000 ** (1 / F.n))))
            res = _sign_change_search(det, B, per_axis, names)
            if res is None:
                res = _interval_certify(det, B, cfg.jacobian_box_budget, names)
    return Validation(G, shift, det, res)


__all__ = ["Validation", "interval_eval", "validate"]