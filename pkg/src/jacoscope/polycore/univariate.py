"""Dense univariate polynomials over Q: gcd, Sturm sequences, root isolation.

Polynomials are plain lists of :class:`~fractions.Fraction`, lowest degree
first, with no trailing zeros (``[]`` is the zero polynomial).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

UPoly = list[Fraction]

DEFAULT_WIDTH = Fraction(1, 2**40)


def trim(p: Sequence) -> UPoly:
    out = [Fraction(c) for c in p]
    while out and not out[-1]:
        out.pop()
    return out


def degree(p: UPoly) -> int:
    return len(p) - 1 if p else -1


def evaluate(p: UPoly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: UPoly) -> UPoly:
    return trim([c * i for i, c in enumerate(p)][1:])


def sub(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def mul(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return trim(out)


def divmod_(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b):
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = trim(r)
    return trim(q), r


def rem(a: UPoly, b: UPoly) -> UPoly:
    return divmod_(a, b)[1]


def monic(p: UPoly) -> UPoly:
    if not p:
        return []
    lead = p[-1]
    return [c / lead for c in p]


def gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def squarefree(p: UPoly) -> UPoly:
    p = trim(p)
    if degree(p) < 1:
        return monic(p)
    g = gcd(p, derivative(p))
    return monic(divmod_(p, g)[0])


def sturm_sequence(p: UPoly) -> list[UPoly]:
    """Sturm chain of the square-free part of ``p``."""
    f = squarefree(p)
    if not f:
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [f, derivative(f)]
    while seq[-1]:
        seq.append([-c for c in rem(seq[-2], seq[-1])])
    return [s for s in seq if s]


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _sign_at_infinity(p: UPoly, positive: bool) -> int:
    s = _sign(p[-1])
    if not positive and degree(p) % 2:
        s = -s
    return s


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _variations_at(seq: list[UPoly], x: Fraction | None, positive: bool = True) -> int:
    if x is None:
        return _variations([_sign_at_infinity(s, positive) for s in seq])
    return _variations([_sign(evaluate(s, x)) for s in seq])


def count_real_roots(p: UPoly, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (``None`` means infinite)."""
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has infinitely many roots")
    if degree(p) == 0:
        return 0
    seq = sturm_sequence(p)
    v_lo = _variations_at(seq, None if lo is None else Fraction(lo), positive=False)
    v_hi = _variations_at(seq, None if hi is None else Fraction(hi), positive=True)
    return v_lo - v_hi


def has_real_root(p: UPoly) -> bool:
    return count_real_roots(p) > 0


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: every real root lies in ``[-B, B]``."""
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: UPoly, width: Fraction = DEFAULT_WIDTH) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(a, b]`` each holding exactly one real root.

    Intervals are refined by bisection until ``b - a <= width``; an exact
    rational root found on the way is returned as the degenerate ``(r, r)``.
    """
    p = trim(p)
    if degree(p) < 1:
        return []
    seq = sturm_sequence(p)
    f = seq[0]
    width = Fraction(width)

    def count(a: Fraction, b: Fraction) -> int:
        return _variations_at(seq, a) - _variations_at(seq, b)

    bound = root_bound(f)
    stack = [(-bound, bound)]
    out: list[tuple[Fraction, Fraction]] = []
    while stack:
        a, b = stack.pop()
        n = count(a, b)
        if n == 0:
            continue
        if n == 1:
            while b - a > width:
                m = (a + b) / 2
                if evaluate(f, m) == 0:
                    a = b = m
                    break
                if count(a, m):
                    b = m
                else:
                    a = m
            if a != b and evaluate(f, b) == 0:
                a = b
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    out.sort()
    return out


def real_roots(p: UPoly, width: Fraction = DEFAULT_WIDTH) -> list[Fraction]:
    """Midpoints of isolating intervals (exact when the root is rational and hit)."""
    return [(a + b) / 2 for a, b in isolate_real_roots(p, width)]
