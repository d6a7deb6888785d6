"""Exact integer and rational matrix helpers.

Matrices are plain tuples of row tuples of Python ints, so entries never
overflow. Row-vector convention throughout: a vector ``v`` is mapped by a
matrix ``M`` as ``v @ M``, i.e. ``vecmat(v, M)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]
IntMatrix = tuple[Vector, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(n: int, m: int) -> IntMatrix:
    return tuple((0,) * m for _ in range(n))


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def vecmat(v: Sequence[int], m: Sequence[Sequence[int]], ncols: int | None = None) -> Vector:
    if not m:
        return (0,) * (ncols or 0)
    out = [0] * len(m[0])
    for coeff, row in zip(v, m):
        if coeff:
            for j, x in enumerate(row):
                out[j] += coeff * x
    return tuple(out)


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def scale(c: int, v: Sequence[int]) -> Vector:
    return tuple(c * x for x in v)


def neg(v: Sequence[int]) -> Vector:
    return tuple(-x for x in v)


def is_zero(v: Sequence[int]) -> bool:
    return not any(v)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matpow(m: IntMatrix, e: int) -> IntMatrix:
    if e < 0:
        raise ValueError("negative power needs an explicit inverse")
    result = identity(len(m))
    base = m
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def matrix_order(m: IntMatrix, cap: int = 10_000) -> int | None:
    """Smallest ``k >= 1`` with ``m**k == I``, or None if none up to ``cap``."""
    eye = identity(len(m))
    p = m
    for k in range(1, cap + 1):
        if p == eye:
            return k
        p = matmul(p, m)
    return None


@dataclass(frozen=True)
class RatMatrix:
    """Rational matrix stored as integer numerators over one positive denominator."""

    numerators: IntMatrix
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        g = self.denominator
        for row in self.numerators:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            object.__setattr__(self, "numerators",
                               tuple(tuple(x // g for x in row) for row in self.numerators))
            object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def from_fractions(cls, rows: Sequence[Sequence[Fraction]]) -> "RatMatrix":
        den = 1
        for row in rows:
            for x in row:
                den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        nums = tuple(tuple(int(Fraction(x) * den) for x in row) for row in rows)
        return cls(nums, den)

    def to_fractions(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denominator) for x in row] for row in self.numerators]

    @property
    def is_integral(self) -> bool:
        return self.denominator == 1
