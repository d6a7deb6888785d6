"""Sublattices of Z^m and finitely generated abelian groups Z^m / L.

Every subgroup of K = Z^m / L is carried as a lattice M with L <= M <= Z^m.
Lattices are stored in canonical row Hermite normal form, so two ``Lattice``
values are equal as sets exactly when they compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import intmat
from .intmat import IntMatrix, Vector


class LatticeError(ValueError):
    """Raised on an ill-posed lattice operation (rank mismatch, containment)."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _echelon(rows: Sequence[Sequence[int]], ncols: int):
    """Row HNF of ``rows`` with transform; returns (H, U, rank, pivots)."""
    a = [list(r) for r in rows]
    n = len(a)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == n:
            break
        for i in range(r + 1, n):
            b = a[i][c]
            if b == 0:
                continue
            p = a[r][c]
            g, x, y = xgcd(p, b)
            pg, bg = p // g, b // g
            ar, ai = a[r], a[i]
            a[r] = [x * s + y * t for s, t in zip(ar, ai)]
            a[i] = [-bg * s + pg * t for s, t in zip(ar, ai)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-bg * s + pg * t for s, t in zip(ur, ui)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-s for s in a[r]]
            u[r] = [-s for s in u[r]]
        p = a[r][c]
        for i in range(r):
            q = a[i][c] // p
            if q:
                a[i] = [s - q * t for s, t in zip(a[i], a[r])]
                u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return a, u, r, pivots


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^m in canonical row Hermite normal form."""

    ambient_rank: int
    basis: IntMatrix = ()

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_rank: int) -> "Lattice":
        return hnf(list(vectors), ambient_rank)[0]

    @classmethod
    def zero(cls, m: int) -> "Lattice":
        return cls(m, ())

    @classmethod
    def full(cls, m: int) -> "Lattice":
        return cls(m, intmat.identity(m))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @property
    def is_full(self) -> bool:
        return self.basis == intmat.identity(self.ambient_rank)

    def __contains__(self, v) -> bool:
        return member(self, v)

    def __le__(self, other: "Lattice") -> bool:
        return contains(other, self)

    def __add__(self, other: "Lattice") -> "Lattice":
        return lattice_sum(self, other)

    def __and__(self, other: "Lattice") -> "Lattice":
        return intersect(self, other)

    def __repr__(self):
        rows = ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.basis)
        return f"Lattice<{self.ambient_rank}>[{rows}]"


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Lattice, IntMatrix]:
    """Canonical row Hermite form of the span of ``rows``.

    Returns the lattice and a unimodular ``transform`` with
    ``transform @ rows`` equal to the lattice basis padded by zero rows.
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    if ncols is None:
        if not rows:
            raise LatticeError("ambient rank needed for an empty generator list")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise LatticeError("generator length differs from ambient rank")
    a, u, r, _ = _echelon(rows, ncols)
    basis = tuple(tuple(row) for row in a[:r])
    return Lattice(ncols, basis), intmat.as_matrix(u)


def _reduce(lat: Lattice, v: Sequence[int]) -> tuple[list[int], list[int]]:
    residual = list(v)
    coeffs = []
    for row, c in zip(lat.basis, lat.pivots):
        q = residual[c] // row[c]
        coeffs.append(q)
        if q:
            residual = [s - q * t for s, t in zip(residual, row)]
    return coeffs, residual


def reduce_mod(lat: Lattice, v: Sequence[int]) -> Vector:
    """Canonical representative of the coset ``v + lat``."""
    if len(v) != lat.ambient_rank:
        raise LatticeError("vector length differs from ambient rank")
    return tuple(_reduce(lat, v)[1])


def coordinates(lat: Lattice, v: Sequence[int]) -> Vector | None:
    """Coefficients of ``v`` in the stored basis, or None if ``v`` is not in ``lat``."""
    if len(v) != lat.ambient_rank:
        raise LatticeError("vector length differs from ambient rank")
    residual = list(v)
    coeffs = []
    for row, c in zip(lat.basis, lat.pivots):
        q, rem = divmod(residual[c], row[c])
        if rem:
            return None
        coeffs.append(q)
        if q:
            residual = [s - q * t for s, t in zip(residual, row)]
    if any(residual):
        return None
    return tuple(coeffs)


def member(lat: Lattice, v: Sequence[int]) -> bool:
    return coordinates(lat, v) is not None


def contains(outer: Lattice, inner: Lattice) -> bool:
    _check_same(outer, inner)
    return all(member(outer, row) for row in inner.basis)


def solve(rows: Sequence[Sequence[int]], target: Sequence[int]) -> Vector | None:
    """Some integer ``x`` with ``x @ rows == target``, or None."""
    if not rows:
        return () if not any(target) else None
    lat, u = hnf(rows, len(target))
    coeffs = coordinates(lat, target)
    if coeffs is None:
        return None
    return intmat.vecmat(coeffs, u[: lat.rank], len(rows))


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis (as rows) of the integer relations ``{x : x @ rows == 0}``."""
    if not rows:
        return ()
    lat, u = hnf(rows, ncols)
    return tuple(u[lat.rank:])


def right_kernel(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis (as rows) of ``{v in Z^ncols : rows @ v == 0}``."""
    if not rows:
        return intmat.identity(ncols)
    return left_kernel(intmat.transpose(rows), len(rows))


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    n = len(m)
    lat, u = hnf(m, n)
    if lat.basis != intmat.identity(n):
        raise LatticeError("matrix is not unimodular")
    return u


def _check_same(l1: Lattice, l2: Lattice):
    if l1.ambient_rank != l2.ambient_rank:
        raise LatticeError(f"ambient rank mismatch: {l1.ambient_rank} vs {l2.ambient_rank}")


def lattice_sum(l1: Lattice, l2: Lattice) -> Lattice:
    _check_same(l1, l2)
    return Lattice.span(l1.basis + l2.basis, l1.ambient_rank)


def intersect(l1: Lattice, l2: Lattice) -> Lattice:
    """Intersection via the integer kernel of the stacked system ``x B1 = y B2``."""
    _check_same(l1, l2)
    m = l1.ambient_rank
    if l1.rank == 0 or l2.rank == 0:
        return Lattice.zero(m)
    kernel = left_kernel(l1.basis + l2.basis, m)
    r1 = l1.rank
    gens = [intmat.vecmat(k[:r1], l1.basis, m) for k in kernel]
    return Lattice.span(gens, m)


def saturate(lat: Lattice) -> Lattice:
    """Isolator closure ``{v : n v in lat for some n > 0}``."""
    m = lat.ambient_rank
    if lat.rank == 0 or lat.rank == m:
        return Lattice.full(m) if lat.rank == m else lat
    ker = right_kernel(lat.basis, m)
    return Lattice.span(right_kernel(ker, m), m)


def is_saturated(lat: Lattice) -> bool:
    return saturate(lat) == lat


def index(outer: Lattice, inner: Lattice) -> int | float:
    """``[outer : inner]`` as an int, or ``math.inf`` when ranks differ."""
    if not contains(outer, inner):
        raise LatticeError("inner lattice is not contained in outer lattice")
    if inner.rank != outer.rank:
        return math.inf
    coords = [coordinates(outer, row) for row in inner.basis]
    return abs(intmat.det(coords))


def smith(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns ``(diag, left, right)`` with ``left @ m @ right == diag``.

    ``left`` and ``right`` are unimodular; diagonal entries are non-negative and
    each divides the next.
    """
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    left = [[int(i == j) for j in range(rows)] for i in range(rows)]
    right = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def row_combo(i, j, x, y, u, v):
        # row_i <- x row_i + y row_j ; row_j <- u row_i + v row_j
        for mat in (a, left):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * s + y * t for s, t in zip(ri, rj)]
            mat[j] = [u * s + v * t for s, t in zip(ri, rj)]

    def col_combo(i, j, x, y, u, v):
        for mat in (a, right):
            for row in mat:
                s, t = row[i], row[j]
                row[i] = x * s + y * t
                row[j] = u * s + v * t

    for k in range(min(rows, cols)):
        nz = [(abs(a[i][j]), i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(k, i0)
        swap_cols(k, j0)
        while True:
            changed = False
            for i in range(k + 1, rows):
                if a[i][k]:
                    g, x, y = xgcd(a[k][k], a[i][k])
                    p, b = a[k][k] // g, a[i][k] // g
                    row_combo(k, i, x, y, -b, p)
                    changed = True
            for j in range(k + 1, cols):
                if a[k][j]:
                    g, x, y = xgcd(a[k][k], a[k][j])
                    p, b = a[k][k] // g, a[k][j] // g
                    col_combo(k, j, x, y, -b, p)
                    changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(k + 1, rows) for j in range(k + 1, cols)
                        if a[i][j] % a[k][k]), None)
            if bad is None:
                break
            # fold the offending row into row k, then re-clear
            i = bad[0]
            a[k] = [s + t for s, t in zip(a[k], a[i])]
            left[k] = [s + t for s, t in zip(left[k], left[i])]
        if a[k][k] < 0:
            a[k] = [-s for s in a[k]]
            left[k] = [-s for s in left[k]]
    return intmat.as_matrix(a), intmat.as_matrix(left), intmat.as_matrix(right)


def invariant_factors(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    d = smith(m)[0]
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i])


def complement_of_saturated(lat: Lattice) -> Lattice:
    """A lattice N with ``Z^m = lat (+) N``.

    Complements are not unique; callers should only rely on the direct-sum
    property, which is verified before returning.
    """
    m = lat.ambient_rank
    if not is_saturated(lat):
        raise LatticeError("complement requested for a non-saturated lattice")
    if lat.rank == 0:
        return Lattice.full(m)
    # U @ B^T = [I; 0] for saturated B, so B is the top block of (U^-1)^T.
    _, u = hnf(intmat.transpose(lat.basis), lat.rank)
    w = intmat.transpose(inverse_unimodular(u))
    comp = Lattice.span(w[lat.rank:], m)
    stacked = lat.basis + comp.basis
    if len(stacked) != m or abs(intmat.det(stacked)) != 1:
        raise AssertionError("complement verification failed")
    return comp


def complement_within(outer: Lattice, inner: Lattice) -> Lattice:
    """Complement of ``inner`` inside ``outer``; ``inner`` must be saturated in ``outer``."""
    coords = [coordinates(outer, row) for row in inner.basis]
    if any(c is None for c in coords):
        raise LatticeError("inner lattice is not contained in outer lattice")
    local = Lattice.span(coords, outer.rank)
    comp = complement_of_saturated(local)
    return Lattice.span([intmat.vecmat(c, outer.basis, outer.ambient_rank) for c in comp.basis],
                        outer.ambient_rank)


def saturate_within(outer: Lattice, inner: Lattice) -> Lattice:
    """Isolator closure of ``inner`` relative to ``outer``: ``saturate(inner) & outer``."""
    return intersect(saturate(inner), outer)


def element_order_mod(lat: Lattice, v: Sequence[int], bound: int | None = None) -> int | None:
    """Least ``n >= 1`` with ``n v`` in ``lat``, or None if no multiple lands there."""
    if not member(saturate(lat), v):
        return None
    n = 1
    while True:
        if member(lat, intmat.scale(n, v)):
            return n
        n += 1
        if bound is not None and n > bound:
            return None


@dataclass(frozen=True)
class FgAbelianGroup:
    """K = Z^m / L."""

    ambient_rank: int
    relations: Lattice = None

    def __post_init__(self):
        if self.relations is None:
            object.__setattr__(self, "relations", Lattice.zero(self.ambient_rank))
        if self.relations.ambient_rank != self.ambient_rank:
            raise LatticeError("relation lattice has the wrong ambient rank")

    @property
    def is_free(self) -> bool:
        return self.relations.rank == 0

    def subgroup(self, gens: Iterable[Sequence[int]]) -> Lattice:
        """Subgroup generated by ``gens``, as a lattice containing the relations."""
        return Lattice.span(list(gens) + list(self.relations.basis), self.ambient_rank)

    def canonical(self, v: Sequence[int]) -> Vector:
        return reduce_mod(self.relations, v)

    def torsion_invariants(self) -> tuple[int, ...]:
        if self.relations.rank == 0:
            return ()
        return tuple(d for d in invariant_factors(self.relations.basis) if d > 1)


@dataclass(frozen=True)
class SubgroupHom:
    """Homomorphism M_A/L -> M_B/L given by images of the basis rows of M_A.

    ``images[i]`` is an ambient vector representing the image of
    ``domain.basis[i]``; images are only meaningful modulo ``relations``.
    """

    domain: Lattice
    codomain: Lattice
    images: IntMatrix
    relations: Lattice = field(default=None)

    def __post_init__(self):
        m = self.domain.ambient_rank
        if self.relations is None:
            object.__setattr__(self, "relations", Lattice.zero(m))
        if len(self.images) != self.domain.rank:
            raise LatticeError("need one image per domain basis row")
        object.__setattr__(self, "images",
                           tuple(reduce_mod(self.relations, v) for v in self.images))

    @property
    def ambient_rank(self) -> int:
        return self.domain.ambient_rank

    def apply(self, v: Sequence[int]) -> Vector:
        coords = coordinates(self.domain, v)
        if coords is None:
            raise LatticeError(f"{tuple(v)} is not in the domain")
        return reduce_mod(self.relations, intmat.vecmat(coords, self.images, self.ambient_rank))

    def image(self, sub: Lattice) -> Lattice:
        """``h(sub) + L``; ``sub`` must lie in the domain."""
        if not contains(self.domain, sub):
            raise LatticeError("sublattice not contained in the domain")
        gens = [self.apply(row) for row in sub.basis]
        return Lattice.span(gens + list(self.relations.basis), self.ambient_rank)

    def preimage(self, target: Lattice) -> Lattice:
        """``{v in domain : h(v) in target + L}``."""
        m = self.ambient_rank
        tgt = lattice_sum(target, self.relations)
        r = self.domain.rank
        if r == 0:
            return Lattice.zero(m)
        kernel = left_kernel(self.images + tgt.basis, m)
        gens = [intmat.vecmat(k[:r], self.domain.basis, m) for k in kernel]
        return Lattice.span(gens, m)

    def kernel(self) -> Lattice:
        return self.preimage(Lattice.zero(self.ambient_rank))

    def inverse(self) -> "SubgroupHom":
        """Inverse isomorphism M_B/L -> M_A/L (requires bijectivity)."""
        m = self.ambient_rank
        system = self.images + self.relations.basis
        r = self.domain.rank
        inv_images = []
        for b in self.codomain.basis:
            x = solve(system, b)
            if x is None:
                raise LatticeError("homomorphism is not surjective onto its codomain")
            inv_images.append(intmat.vecmat(x[:r], self.domain.basis, m))
        return SubgroupHom(self.codomain, self.domain, tuple(inv_images), self.relations)

    def restrict(self, sub: Lattice) -> "SubgroupHom":
        """Restriction to ``sub`` (a sublattice of the domain), codomain = image."""
        return SubgroupHom(sub, self.image(sub), tuple(self.apply(row) for row in sub.basis),
                           self.relations)

    def problems(self) -> list[str]:
        """Violated isomorphism predicates; empty when the map is a valid iso."""
        out = []
        L = self.relations
        if not contains(self.domain, L):
            out.append("relations not contained in domain")
        if not contains(self.codomain, L):
            out.append("relations not contained in codomain")
        if out:
            return out
        for i, v in enumerate(self.images):
            if not member(self.codomain, v):
                out.append(f"image {i} {v} not in codomain")
        if out:
            return out
        for row in L.basis:
            if not member(L, self.apply(row)):
                out.append(f"relation {row} maps outside the relations (not well defined)")
        if out:
            return out
        img = Lattice.span(list(self.images) + list(L.basis), self.ambient_rank)
        if img != self.codomain:
            out.append("not surjective onto codomain")
        if self.preimage(Lattice.zero(self.ambient_rank)) != L:
            out.append("not injective (kernel larger than relations)")
        return out


snf = smith


def hom_image(h: SubgroupHom, sub: Lattice) -> Lattice:
    return h.image(sub)


def hom_preimage(h: SubgroupHom, target: Lattice) -> Lattice:
    return h.preimage(target)
