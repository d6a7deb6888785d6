"""Small exact linear algebra over Q (Fraction entries)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

FracMatrix = list[list[Fraction]]


def to_frac(m: Sequence[Sequence]) -> FracMatrix:
    return [[Fraction(x) for x in row] for row in m]


def rref(m: Sequence[Sequence]) -> tuple[FracMatrix, list[int]]:
    a = to_frac(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def left_nullspace(m: Sequence[Sequence], nrows: int | None = None) -> FracMatrix:
    """Basis of {x : x @ m = 0} as row vectors."""
    n = len(m) if m else (nrows or 0)
    if not m:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return nullspace([list(col) for col in zip(*m)])


def nullspace(m: Sequence[Sequence]) -> FracMatrix:
    """Basis of {x : m @ x = 0} as row vectors."""
    a, pivots = rref(m)
    cols = len(m[0]) if m else 0
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        basis.append(v)
    return basis


def solve_left(rows: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Some x with x @ rows = target, or None."""
    n = len(rows)
    if n == 0:
        return [] if not any(target) else None
    aug = [list(col) + [t] for col, t in zip(zip(*rows), target)]
    a, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = a[r][n]
    return x


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> FracMatrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def identity(n: int) -> FracMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def charpoly(m: Sequence[Sequence]) -> list[Fraction]:
    """Characteristic polynomial det(xI - m), coefficients highest degree first.

    Faddeev-LeVerrier recursion; exact over Q.
    """
    n = len(m)
    a = to_frac(m)
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prod = matmul(a, mk) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        mk = [[prod[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = matmul(a, mk)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def poly_at_matrix(coeffs: Sequence, m: Sequence[Sequence]) -> FracMatrix:
    """Evaluate a polynomial (highest degree first) at a square matrix (Horner)."""
    n = len(m)
    a = to_frac(m)
    result = [[Fraction(0)] * n for _ in range(n)]
    for c in coeffs:
        result = matmul(result, a)
        for i in range(n):
            result[i][i] += Fraction(c)
    return result
