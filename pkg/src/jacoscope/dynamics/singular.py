"""Locating finite singular points of a planar polynomial field."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..compactify import PlanarField


@dataclass(frozen=True)
class SingularPoint:
    x: float
    y: float
    residual: float

    def to_dict(self) -> dict:
        return {"point": [self.x, self.y], "residual": self.residual}


@dataclass
class SingularPointSet:
    points: list[SingularPoint]
    non_isolated: bool = False
    warnings: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


def _newton(X: PlanarField, x: np.ndarray, y: np.ndarray, iterations: int):
    P, Q = X.p.compile(), X.q.compile()
    Px, Py = X.p.partial(0).compile(), X.p.partial(1).compile()
    Qx, Qy = X.q.partial(0).compile(), X.q.partial(1).compile()
    zero = np.zeros_like(x)

    def F(x, y):
        return P(x, y) + zero, Q(x, y) + zero

    p, q = F(x, y)
    res = np.hypot(p, q)
    with np.errstate(all="ignore"):
        for _ in range(iterations):
            a, b = Px(x, y) + zero, Py(x, y) + zero
            c, d = Qx(x, y) + zero, Qy(x, y) + zero
            det = a * d - b * c
            ok = np.abs(det) > 1e-300
            # Newton step where the Jacobian is invertible, gradient step otherwise
            sx = np.where(ok, (d * p - b * q) / np.where(ok, det, 1.0), a * p + c * q)
            sy = np.where(ok, (a * q - c * p) / np.where(ok, det, 1.0), b * p + d * q)
            lam = np.ones_like(x)
            best_x, best_y, best_res = x.copy(), y.copy(), res.copy()
            pending = np.ones_like(x, dtype=bool)
            for _ in range(30):
                nx, ny = x - lam * sx, y - lam * sy
                np_, nq = F(nx, ny)
                nres = np.hypot(np_, nq)
                better = pending & np.isfinite(nres) & (nres < res)
                best_x = np.where(better, nx, best_x)
                best_y = np.where(better, ny, best_y)
                best_res = np.where(better, nres, best_res)
                pending &= ~better
                if not pending.any():
                    break
                lam = np.where(pending, lam * 0.5, lam)
            x, y, res = best_x, best_y, best_res
            p, q = F(x, y)
    return x, y, res


def find_singular_points(X: PlanarField, box=((-5.0, 5.0), (-5.0, 5.0)), grid=(41, 41),
                         residual_tol: float = 1e-10, dedup_radius: float = 1e-7,
                         iterations: int = 60) -> SingularPointSet:
    """Zeros of the field in ``box`` by grid seeding and damped Newton.

    Each seed is refined with backtracking Newton steps; converged points
    with ``|field| <= residual_tol`` inside the box are clustered with
    radius ``dedup_radius``.  More distinct points than the Bezout bound
    ``deg p * deg q`` means the zero set is not isolated (a curve of zeros),
    which is flagged rather than silently returned as a finite list.
    """
    (x0, x1), (y0, y1) = box
    nx, ny = grid if isinstance(grid, (tuple, list)) else (grid, grid)
    gx, gy = np.meshgrid(np.linspace(x0, x1, nx), np.linspace(y0, y1, ny), indexing="ij")
    x, y, res = _newton(X, gx.ravel(), gy.ravel(), iterations)
    pad = 1e-9 * max(x1 - x0, y1 - y0)
    keep = (np.isfinite(res) & (res <= residual_tol) & (x >= x0 - pad) & (x <= x1 + pad)
            & (y >= y0 - pad) & (y <= y1 + pad))
    cands = sorted(zip(x[keep], y[keep], res[keep]), key=lambda t: (t[2], t[0], t[1]))
    found: list[SingularPoint] = []
    for cx, cy, r in cands:
        if all(np.hypot(cx - s.x, cy - s.y) > dedup_radius for s in found):
            found.append(SingularPoint(float(cx), float(cy), float(r)))
    found.sort(key=lambda s: (round(s.x, 9), round(s.y, 9)))
    warnings = []
    dp, dq = X.p.degree, X.q.degree
    bezout = int(dp * dq) if dp > 0 and dq > 0 else 1
    non_isolated = False
    if X.p.is_zero() or X.q.is_zero() or len(found) > bezout:
        non_isolated = True
        warnings.append(f"{len(found)} distinct zeros found, more than the Bezout bound {bezout}: "
                        "the zero set is not isolated")
    return SingularPointSet(found, non_isolated, warnings)
