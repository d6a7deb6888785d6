"""Brute-force reference implementations, independent of the Hermite machinery.

Membership in the span of arbitrary integer generators is decided by picking
a rationally independent subset, whose span has finite index in the full
span, and enumerating the finite quotient by breadth-first search on
fractional coordinate vectors. Everything else is box enumeration.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import rational


class SpanOracle:
    """Coordinates over the independent subset are kept as integer numerators
    over one common denominator ``den``; a coset is the numerator vector mod den."""

    def __init__(self, gens: Sequence[Sequence[int]], m: int):
        self.m = m
        gens = [tuple(int(x) for x in g) for g in gens if any(g)]
        indep: list[tuple[int, ...]] = []
        for g in gens:
            if rational.rank(indep + [g]) > len(indep):
                indep.append(g)
        self.indep = indep
        self.rank = len(indep)
        # x . indep = v is solved on pivot columns with a precomputed inverse
        self.pivots = rational.rref(indep)[1] if indep else []
        square = [[g[c] for c in self.pivots] for g in indep]
        inv = [rational.solve_left(square, [int(i == j) for j in range(self.rank)])
               for i in range(self.rank)]
        self.den = math.lcm(1, *(x.denominator for row in inv for x in row))
        self.inv = [[int(x * self.den) for x in row] for row in inv]
        zero = (0,) * self.rank
        seen = {zero}
        frontier = [zero]
        steps = [self._frac(self._coords(g)) for g in gens]
        while frontier:
            x = frontier.pop()
            for s in steps:
                y = self._frac(tuple(a + b for a, b in zip(x, s)))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        self.cosets = seen

    def _coords(self, v) -> tuple[int, ...] | None:
        """Numerators of the coordinates of v (denominator ``den``), or None outside the span."""
        if not self.indep:
            return () if not any(v) else None
        x = tuple(sum(v[c] * row[j] for c, row in zip(self.pivots, self.inv)) for j in range(self.rank))
        for k in range(self.m):
            if sum(xi * g[k] for xi, g in zip(x, self.indep)) != self.den * v[k]:
                return None
        return x

    def coordinates(self, v) -> tuple[Fraction, ...] | None:
        x = self._coords(tuple(v))
        return None if x is None else tuple(Fraction(a, self.den) for a in x)

    def _frac(self, x) -> tuple[int, ...]:
        return tuple(a % self.den for a in x)

    def __contains__(self, v) -> bool:
        c = self._coords(tuple(v))
        if c is None:
            return False
        return self._frac(c) in self.cosets

    def in_rational_span(self, v) -> bool:
        return self._coords(tuple(v)) is not None


def box(m: int, bound: int):
    return product(range(-bound, bound + 1), repeat=m)


def box_set(pred, m: int, bound: int) -> frozenset:
    return frozenset(v for v in box(m, bound) if pred(v))


def preimage_pred(a_basis, images, target: SpanOracle, m: int):
    """v lies in the preimage iff v = x . a_basis with integer x and x . images in target."""
    a_or = SpanOracle(a_basis, m)

    def pred(v):
        if v not in a_or:
            return False
        x = a_or.coordinates(v)
        img = tuple(int(sum(c * im[j] for c, im in zip(x, images))) for j in range(m))
        return img in target
    return pred


def index_oracle(outer: Sequence[Sequence[int]], inner: Sequence[Sequence[int]], m: int,
                 cap: int = 10_000) -> int | float:
    """Coset count of inner in outer by breadth-first search; inf if ranks differ.

    A coset y + inner is keyed by the smallest fractional-coordinate vector
    in the class of y's coordinates over inner's independent subset.
    """
    o = SpanOracle(outer, m)
    i = SpanOracle(inner, m)
    if o.rank != i.rank:
        return math.inf
    shifts = sorted(i.cosets)

    def key(y):
        c = i._coords(y)
        if c is None:
            raise ValueError(f"{y} is not in the rational span of inner")
        return min(i._frac(tuple(a + b for a, b in zip(c, s))) for s in shifts)

    start = (0,) * m
    seen = {key(start)}
    frontier = [start]
    gens = [tuple(g) for g in outer] + [tuple(-x for x in g) for g in outer]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple(a + b for a, b in zip(x, g))
            k = key(y)
            if k not in seen:
                seen.add(k)
                frontier.append(y)
                if len(seen) > cap:
                    raise RuntimeError("index exceeds the oracle cap")
    return len(seen)
