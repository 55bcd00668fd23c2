"""Symbolic Jacobian matrix and determinant."""

from __future__ import annotations

from .poly import Poly, PolyMap

MAX_SYMBOLIC_DET = 6


class BudgetError(RuntimeError):
    """A computation was refused because it exceeds a configured budget."""


def jacobian_matrix(F: PolyMap) -> list[list[Poly]]:
    n = F.n
    return [[F[i].partial(j) for j in range(n)] for i in range(n)]


def _cofactor_det(m: list[list[Poly]]) -> Poly:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = Poly.zero(m[0][0].nvars)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _bareiss_det(m: list[list[Poly]]) -> Poly:
    n = len(m)
    a = [row[:] for row in m]
    nv = a[0][0].nvars
    sign = 1
    prev = Poly.constant(1, nv)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Poly.zero(nv)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def determinant(m: list[list[Poly]], max_size: int = MAX_SYMBOLIC_DET) -> Poly:
    """Exact determinant: cofactor expansion up to 4x4, fraction-free Bareiss above."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n > max_size:
        raise BudgetError(f"symbolic determinant capped at n <= {max_size}, got n = {n}")
    if n <= 4:
        return _cofactor_det(m)
    return _bareiss_det(m)


def jacobian_det(F: PolyMap, max_size: int = MAX_SYMBOLIC_DET) -> Poly:
    return determinant(jacobian_matrix(F), max_size)
