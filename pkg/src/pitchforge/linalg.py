"""Exact rational Gaussian elimination helpers.

Small dense solvers used wherever a certificate or an LP certification step
needs an exact solution of a linear system.  Everything returns Fractions;
internally gmpy2.mpq is used when available.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_Q0 = _Q(0)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    return Fraction(int(v.numerator), int(v.denominator))


def solve_rectangular(
    matrix: Sequence[Sequence], rhs: Sequence
) -> Optional[list[Fraction]]:
    """Solve M x = b exactly for a rectangular M.

    Returns one solution with every free variable set to 0, or None when the
    system is inconsistent.  Partial pivoting by first nonzero entry (the
    arithmetic is exact, so this is only a structural choice).
    """
    m = len(matrix)
    if m == 0:
        return []
    n = len(matrix[0])
    rows = [[_Q(v) if not isinstance(v, Fraction) else _Q(v.numerator, v.denominator)
             for v in row] + [
                _Q(b) if not isinstance(b, Fraction) else _Q(b.numerator, b.denominator)]
            for row, b in zip(matrix, rhs)]
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for c in range(n):
        pivot_row = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        if inv != 1:
            rows[r] = pr = [v * inv for v in pr]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][-1] != 0:
            return None  # 0 = nonzero: inconsistent
    x = [Fraction(0)] * n
    for pr, pc in pivots:
        x[pc] = _frac(rows[pr][-1])
    return x


def rank(matrix: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix."""
    m = len(matrix)
    if m == 0:
        return 0
    n = len(matrix[0])
    rows = [[_Q(v) if not isinstance(v, Fraction) else _Q(v.numerator, v.denominator)
             for v in row] for row in matrix]
    r = 0
    for c in range(n):
        pivot_row = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pr = rows[r]
        for i in range(r + 1, m):
            if rows[i][c]:
                f = rows[i][c] / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        r += 1
        if r == m:
            break
    return r
