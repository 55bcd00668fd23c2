"""Brute-force search for two points with the same image."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polycore import PolyMap


@dataclass(frozen=True)
class CollisionWitness:
    p: tuple[float, ...]
    q: tuple[float, ...]
    image_residual: float
    separation: float

    def to_dict(self) -> dict:
        return {"p": list(self.p), "q": list(self.q), "residual": self.image_residual,
                "separation": self.separation}


@dataclass
class CandidateSet:
    pairs: list[tuple[tuple[float, ...], tuple[float, ...]]]
    resolution: int
    bucket_size: float
    grid_spacing: float
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _box(box, n: int) -> list[tuple[float, float]]:
    if isinstance(box, (int, float)):
        return [(-float(box), float(box))] * n
    box = [tuple(map(float, b)) for b in box]
    if len(box) != n:
        raise ValueError(f"box has {len(box)} intervals for a map in {n} variables")
    return box


def grid_collision(F: PolyMap, box=3.0, resolution: int = 201, bucket_size: float | None = None,
                   max_points: int = 4_000_000, max_pairs: int = 10_000) -> CandidateSet:
    """Grid points whose images land in the same or adjacent buckets.

    Images are hashed into cells of width ``bucket_size`` (default: a quarter
    of the grid spacing).  Pairs closer than two grid cells in the domain
    are ignored since nonvanishing Jacobian makes F locally injective.  If
    ``resolution^n`` exceeds ``max_points`` the grid is coarsened and a
    warning recorded.  Pairs come out in a deterministic order.
    """
    n = F.n
    if resolution < 2:
        raise ValueError("resolution must be at least 2 per axis")
    warnings = []
    res = resolution
    if res**n > max_points:
        res = max(2, int(max_points ** (1 / n)))
        warnings.append(f"grid coarsened from {resolution} to {res} points per axis (memory budget)")
    box = _box(box, n)
    axes = [np.linspace(a, b, res) for a, b in box]
    spacing = max((b - a) / (res - 1) for a, b in box)
    h = float(bucket_size) if bucket_size else 0.25 * spacing
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    cols = [pts[:, i] for i in range(n)]
    with np.errstate(all="ignore"):
        imgs = np.stack([np.asarray(p.compile()(*cols), dtype=float) + np.zeros(len(pts)) for p in F], axis=1)
    finite = np.all(np.isfinite(imgs), axis=1)
    keys = np.floor(imgs / h)
    buckets: dict[tuple, list[int]] = {}
    for idx in np.flatnonzero(finite):
        buckets.setdefault(tuple(int(k) for k in keys[idx]), []).append(int(idx))
    offsets = [o for o in np.ndindex(*([3] * n))]
    min_sep = 2 * spacing
    seen = set()
    pairs = []
    for key in sorted(buckets):
        members = buckets[key]
        for off in offsets:
            nb = tuple(k + o - 1 for k, o in zip(key, off))
            if nb < key or nb not in buckets:
                continue
            others = buckets[nb]
            for i in members:
                for j in others:
                    if j == i:
                        continue
                    a, b = (i, j) if i < j else (j, i)
                    if (a, b) in seen:
                        continue
                    if float(np.max(np.abs(pts[a] - pts[b]))) < min_sep:
                        continue
                    seen.add((a, b))
                    pairs.append((a, b))
                    if len(pairs) >= max_pairs:
                        warnings.append(f"candidate list truncated at {max_pairs} pairs")
                        break
                if len(pairs) >= max_pairs:
                    break
            if len(pairs) >= max_pairs:
                break
        if len(pairs) >= max_pairs:
            break
    pairs.sort(key=lambda ab: float(np.linalg.norm(imgs[ab[0]] - imgs[ab[1]])))
    out = [(tuple(map(float, pts[a])), tuple(map(float, pts[b]))) for a, b in pairs]
    return CandidateSet(out, res, h, spacing, warnings)


def _jacobian_fns(F: PolyMap):
    return [[p.partial(j).compile() for j in range(F.n)] for p in F]


def _eval(fns, x) -> np.ndarray:
    return np.array([float(f(*x)) for f in fns])


def _jac(jfns, x) -> np.ndarray:
    return np.array([[float(f(*x)) for f in row] for row in jfns])


def exact_residual(F: PolyMap, p, q) -> float:
    """``|F(p) - F(q)|`` evaluated in exact rationals at the float points."""
    fp = F.eval_exact([Fraction(v) for v in p])
    fq = F.eval_exact([Fraction(v) for v in q])
    return math.sqrt(float(sum((a - b) ** 2 for a, b in zip(fp, fq))))


def refine_collision(F: PolyMap, p0, q0, max_residual: float = 1e-10, min_separation: float = 1e-4,
                     max_iter: int = 100, trust: float = 1.0) -> CollisionWitness | None:
    """Damped Gauss-Newton on ``F(p) - F(q) = 0`` in ``2n`` unknowns.

    Steps are minimum-norm least-squares solutions, capped at ``trust``
    times the current separation so the pair cannot jump together in one
    step, and halved until the residual decreases.  Returns ``None`` when
    the iteration stalls, diverges or the pair collapses below
    ``min_separation``.  An accepted witness is re-checked in exact
    arithmetic.
    """
    n = F.n
    fns = [p.compile() for p in F]
    jfns = _jacobian_fns(F)
    z = np.concatenate([np.asarray(p0, dtype=float), np.asarray(q0, dtype=float)])

    def resid(z):
        with np.errstate(all="ignore"):
            return _eval(fns, z[:n]) - _eval(fns, z[n:])

    r = resid(z)
    norm = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if not np.isfinite(norm):
            return None
        sep = float(np.linalg.norm(z[:n] - z[n:]))
        if sep < min_separation:
            return None
        if norm <= max_residual * 1e-3:
            break
        J = np.hstack([_jac(jfns, z[:n]), -_jac(jfns, z[n:])])
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        cap = trust * sep
        sn = float(np.linalg.norm(step))
        if sn > cap:
            step *= cap / sn
        lam = 1.0
        improved = False
        for _ in range(40):
            zn = z + lam * step
            rn = resid(zn)
            nn = float(np.linalg.norm(rn))
            if np.isfinite(nn) and nn < norm:
                z, r, norm = zn, rn, nn
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
    p, q = tuple(map(float, z[:n])), tuple(map(float, z[n:]))
    sep = math.dist(p, q)
    if sep < min_separation:
        return None
    res = exact_residual(F, p, q)
    if res > max_residual:
        return None
    return CollisionWitness(p, q, res, sep)


@dataclass
class OracleReport:
    witnesses: list[CollisionWitness]
    candidates: int
    refined: int
    resolution: int
    bucket_size: float
    warnings: list[str]

    def to_dict(self) -> dict:
        return {
            "witnesses": [w.to_dict() for w in self.witnesses],
            "candidates": self.candidates,
            "refined": self.refined,
            "resolution": self.resolution,
            "bucket_size": self.bucket_size,
            "warnings": self.warnings,
        }


def search(F: PolyMap, box=3.0, resolution: int = 201, bucket_size: float | None = None,
           max_candidates: int = 64, max_residual: float = 1e-10, min_separation: float = 1e-4,
           max_points: int = 4_000_000, stop_after: int = 1) -> OracleReport:
    """Grid candidates followed by refinement; silence is never evidence of injectivity."""
    cands = grid_collision(F, box, resolution, bucket_size, max_points)
    witnesses: list[CollisionWitness] = []
    tried = 0
    for p, q in cands.pairs[:max_candidates]:
        tried += 1
        w = refine_collision(F, p, q, max_residual, min_separation)
        if w is not None and not any(
                math.dist(w.p, v.p) + math.dist(w.q, v.q) < min_separation
                or math.dist(w.p, v.q) + math.dist(w.q, v.p) < min_separation for v in witnesses):
            witnesses.append(w)
            if len(witnesses) >= stop_after:
                break
    return OracleReport(witnesses, len(cands), tried, cands.resolution, cands.bucket_size, cands.warnings)
