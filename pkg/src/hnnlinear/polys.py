"""Integer polynomial factorization.

Coefficient sequences are ordered highest degree first, so ``(1, 0, -1)`` is
x^2 - 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import sympy

_x = sympy.Symbol("x")


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    coeffs = tuple(int(c) for c in coeffs)
    i = 0
    while i < len(coeffs) and coeffs[i] == 0:
        i += 1
    return coeffs[i:]


def primitive_part(coeffs: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Integer primitive polynomial proportional to ``coeffs``, positive leading term."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints] if g else ints
    ints = list(_trim(ints))
    if ints and ints[0] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def _sympy_factors(coeffs: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    poly = sympy.Poly(list(coeffs), _x, domain="ZZ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        fc = [int(c) for c in f.all_coeffs()]
        if fc[0] < 0:
            fc = [-c for c in fc]
        out.append((tuple(fc), int(mult)))
    out.sort()
    return out


def factor_integer_poly(coeffs: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    """Factor a monic integer polynomial into monic irreducibles over Q.

    Returns ``[(factor, multiplicity), ...]``; the product reproduces the input.
    """
    c = _trim(coeffs)
    if not c:
        raise ValueError("zero polynomial")
    if c[0] != 1:
        raise ValueError(f"polynomial is not monic: leading coefficient {c[0]}")
    if len(c) == 1:
        return []
    return _sympy_factors(c)


def factor_rational_poly(coeffs: Sequence[Fraction | int]) -> list[tuple[tuple[int, ...], int]]:
    """Irreducible factors over Q of any nonzero polynomial, as primitive integer polynomials."""
    prim = primitive_part(coeffs)
    if not prim:
        raise ValueError("zero polynomial")
    if len(prim) == 1:
        return []
    return _sympy_factors(prim)


def is_unit_factor(factor: Sequence[int]) -> bool:
    """Monic over Z with constant term +-1, i.e. the roots are algebraic units."""
    f = _trim(factor)
    return len(f) >= 2 and f[0] == 1 and abs(f[-1]) == 1


def poly_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(out)


def poly_pow(p: Sequence[int], e: int) -> tuple[int, ...]:
    out: tuple[int, ...] = (1,)
    for _ in range(e):
        out = poly_mul(out, p)
    return out
