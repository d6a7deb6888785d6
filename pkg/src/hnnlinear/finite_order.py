"""Finite-index subgroups on which phi extends to a finite-order automorphism.

For a free base K with D = 0, orbits of elements of A & B under phi run
out of A & B in both directions after finitely many steps. Each such orbit
segment spans a free summand on which the cyclic shift of the segment is a
finite-order automorphism agreeing with phi where phi is defined; these
shifts glue to an automorphism of a finite-index subgroup of K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import intmat
from .hnn import HnnInstance
from .intmat import IntMatrix, Vector
from .invariants import m_chain
from .lattice import (
    Lattice,
    complement_of_saturated,
    complement_within,
    coordinates,
    element_order_mod,
    index,
    left_kernel,
    member,
    saturate,
    solve,
)

REPLACEMENT_CAP = 64


class ExtensionError(ValueError):
    """Precondition failure (D != 0, torsion in K, bad starting element)."""


class ObstructionError(RuntimeError):
    """The glued automorphism failed a consistency check; ``report`` has the details."""

    def __init__(self, kind: str, **details):
        super().__init__(f"{kind}: {details}")
        self.report = {"kind": kind, **details}


@dataclass(frozen=True)
class OrbitRun:
    c: Vector
    lam: int
    mu: int
    S_interior: tuple[Vector, ...]
    S_bar: tuple[Vector, ...]
    replacements: tuple[tuple[Vector, int], ...] = ()

    @property
    def length(self) -> int:
        return self.lam + 1 + self.mu

    def shift_images(self) -> tuple[Vector, ...]:
        """Images of ``S_bar`` under the cyclic shift phi^j(c) -> phi^(j+1)(c)."""
        return self.S_bar[1:] + self.S_bar[:1]


@dataclass(frozen=True)
class SSystem:
    runs: tuple[OrbitRun, ...]
    S: Lattice
    C: Lattice
    theta_images: IntMatrix
    abar: tuple[Vector, ...] = ()
    bbar: tuple[Vector, ...] = ()

    @property
    def extended(self) -> bool:
        return bool(self.abar)

    def theta(self, v) -> Vector:
        x = coordinates(self.C, v)
        if x is None:
            raise ValueError(f"{tuple(v)} is not in C")
        return intmat.vecmat(x, self.theta_images, self.C.ambient_rank)


@dataclass(frozen=True)
class FiniteOrderExtension:
    K_bar: Lattice
    phi_bar: IntMatrix
    order: int
    complement: Lattice
    index_in_K: int
    system: SSystem | None = field(default=None, compare=False)

    def apply(self, v) -> Vector:
        """phi_bar on an ambient vector of K_bar."""
        x = coordinates(self.K_bar, v)
        if x is None:
            raise ValueError(f"{tuple(v)} is not in K_bar")
        return intmat.vecmat(intmat.vecmat(x, self.phi_bar), self.K_bar.basis)

    def coords(self, v) -> Vector:
        x = coordinates(self.K_bar, v)
        if x is None:
            raise ValueError(f"{tuple(v)} is not in K_bar")
        return x


@dataclass(frozen=True)
class RootOvergroup:
    """X = (1/d) K_bar, an overgroup of K; vectors of X are stored scaled by d."""

    X_basis: IntMatrix
    denominator: int
    theta_X: IntMatrix
    index_of_K: int

    def theta(self, v) -> tuple[Fraction, ...]:
        """theta_X on an element of K given as an integer ambient vector."""
        d = self.denominator
        lat = Lattice(len(v), self.X_basis)
        x = coordinates(lat, intmat.scale(d, v))
        img = intmat.vecmat(intmat.vecmat(x, self.theta_X), self.X_basis)
        return tuple(Fraction(y, d) for y in img)

    def order(self) -> int:
        return intmat.matrix_order(self.theta_X)


def _require_d_zero(inst: HnnInstance):
    if not inst.base.is_free:
        raise ExtensionError("base group has torsion; pass to the quotient first")
    if m_chain(inst).D.rank:
        raise ExtensionError("D is nontrivial; the construction needs D = 0")


def _walk(inst: HnnInstance, c: Vector, forward: bool, cap: int) -> list[Vector]:
    """c, phi^{+-1}(c), ... up to and including the first point outside A & B."""
    step = inst.phi if forward else inst.phi_inv
    pts = [c]
    while member(inst.AB, pts[-1]):
        if len(pts) > cap:
            raise ExtensionError("orbit does not leave A & B; D = 0 precondition violated?")
        pts.append(step.apply(pts[-1]))
    return pts


def orbit_run(inst: HnnInstance, c, cap: int = REPLACEMENT_CAP, check_d: bool = True) -> OrbitRun:
    """Maximal orbit segment of ``c`` inside A & B, with both endpoints escaping for good.

    If some power of an endpoint falls back into A & B, ``c`` is replaced by
    the product of those powers and the run restarts.
    """
    if check_d:
        _require_d_zero(inst)
    c = tuple(c)
    if not any(c):
        raise ExtensionError("c must be nonzero")
    if not member(inst.AB, c):
        raise ExtensionError(f"{c} is not in A & B")
    m = inst.ambient_rank
    walk_cap = 4 * m + 4
    replacements = []
    for _ in range(cap):
        fwd = _walk(inst, c, True, walk_cap)
        bwd = _walk(inst, c, False, walk_cap)
        k_fwd = element_order_mod(inst.AB, fwd[-1])
        k_bwd = element_order_mod(inst.AB, bwd[-1])
        if k_fwd is None and k_bwd is None:
            break
        factor = (k_fwd or 1) * (k_bwd or 1)
        replacements.append((c, factor))
        c = intmat.scale(factor, c)
    else:
        raise ExtensionError(f"replacement loop exceeded {cap} iterations; D = 0 precondition violated?")
    lam, mu = len(bwd) - 1, len(fwd) - 1
    S_bar = tuple(reversed(bwd)) + tuple(fwd[1:])
    run = OrbitRun(c, lam, mu, S_bar[1:-1], S_bar, tuple(replacements))
    _check_run(inst, run)
    return run


def _check_run(inst: HnnInstance, run: OrbitRun):
    m = inst.ambient_rank
    if Lattice.span(run.S_bar, m).rank != len(run.S_bar):
        raise ObstructionError("dependent_orbit", S_bar=run.S_bar)
    for p in run.S_interior:
        if not member(inst.AB, p):
            raise AssertionError(f"interior point {p} left A & B")
    sat = saturate(inst.AB)
    for p in (run.S_bar[0], run.S_bar[-1]):
        if member(sat, p):
            raise AssertionError(f"endpoint {p} has a power in A & B")


def orbit_strings(inst: HnnInstance) -> list[tuple[Vector, ...]]:
    """Decompose Q^m into maximal phi-strings s, phi(s), ..., phi^n(s).

    Starts of strings with p + 1 points are taken from the lattice on which
    phi^p is defined, independent modulo B and the longer strings. With
    D = 0 the strings are linearly independent and span Q^m.
    """
    m = inst.ambient_rank
    domains = [Lattice.full(m), inst.A]
    while domains[-1].rank:
        nxt = inst.phi.preimage(domains[-1]) & inst.A
        if len(domains) > 4 * m + 4:
            raise ExtensionError("phi-domains do not shrink to zero; D = 0 precondition violated?")
        domains.append(nxt)
    strings: list[tuple[Vector, ...]] = []
    # starts at level p: elements of domains[p] independent modulo
    # domains[p + 1] + B and the starts already chosen
    for p in range(len(domains) - 2, -1, -1):
        span = domains[p + 1] + inst.B + Lattice.span([s[0] for s in strings], m)
        for v in domains[p].basis:
            grown = span + Lattice.span([v], m)
            if grown.rank == span.rank:
                continue
            span = grown
            pts = [v]
            for _ in range(p):
                pts.append(inst.phi.apply(pts[-1]))
            strings.append(tuple(pts))
    total = sum(len(s) for s in strings)
    flat = [v for s in strings for v in s]
    if total != m or Lattice.span(flat, m).rank != m:
        raise ObstructionError("string_decomposition_failed", strings=strings)
    return strings


def _choose_complement(inst: HnnInstance, span: Lattice) -> Vector:
    satAB = saturate(inst.AB)
    inner = saturate(span & inst.AB)
    comp = complement_within(satAB, inner)
    v = comp.basis[0]
    return intmat.scale(element_order_mod(inst.AB, v), v)


def _glue(gens, images, m, check_a: HnnInstance | None = None):
    """Lattice spanned by ``gens`` with the map gens -> images, verified well defined."""
    for rel in left_kernel(gens, m):
        if any(intmat.vecmat(rel, images, m)):
            raise ObstructionError("theta_not_well_defined", relation=rel)
    lat = Lattice.span(gens, m)
    theta_images = []
    for b in lat.basis:
        x = solve(gens, b)
        theta_images.append(intmat.vecmat(x, images, m))
    if Lattice.span(theta_images, m) != lat:
        raise ObstructionError("theta_not_surjective")
    if check_a is not None:
        inst = check_a
        for a in (lat & inst.A).basis:
            x = coordinates(lat, a)
            if intmat.vecmat(x, theta_images, m) != inst.phi.apply(a):
                raise ObstructionError("theta_disagrees_with_phi", element=a)
    return lat, tuple(theta_images)


def build_s_system(inst: HnnInstance, choice: str = "strings", check_d: bool = True) -> SSystem:
    """Runs c_1, c_2, ... until their span meets A & B in finite index, glued into theta.

    ``choice`` selects the next starting element: ``"strings"`` takes the
    first interior point of each maximal phi-string; ``"complement"`` takes
    the first basis vector of a complement of the running span inside the
    isolator of A & B.
    """
    if check_d:
        _require_d_zero(inst)
    m = inst.ambient_rank
    AB = inst.AB
    if AB.rank == 0:
        raise ExtensionError("A & B is trivial; use the disjoint construction")
    runs: list[OrbitRun] = []
    span = Lattice.zero(m)
    if choice == "strings":
        candidates = [s[1] for s in orbit_strings(inst) if len(s) >= 3]
    elif choice != "complement":
        raise ValueError(f"unknown choice {choice!r}")
    while (span & AB).rank < AB.rank:
        if choice == "strings":
            c = next(v for v in candidates if not member(saturate(span), v))
        else:
            c = _choose_complement(inst, span)
        run = orbit_run(inst, c, check_d=False)
        runs.append(run)
        span = span + Lattice.span(run.S_bar, m)
        if len(runs) > AB.rank:
            raise AssertionError("run count exceeded the rank of A & B")
    gens = [v for r in runs for v in r.S_bar]
    images = [v for r in runs for v in r.shift_images()]
    S, theta_images = _glue(gens, images, m, check_a=inst)
    abar: tuple[Vector, ...] = ()
    bbar: tuple[Vector, ...] = ()
    C = S
    if index(saturate(inst.A + inst.B), S & (inst.A + inst.B)) == math.inf or \
            not S <= inst.A + inst.B or (S.rank < (inst.A + inst.B).rank):
        inner = saturate(inst.A & S) & inst.A
        abar = complement_within(inst.A, inner).basis
        bbar = tuple(inst.phi.apply(a) for a in abar)
        gens = gens + list(abar) + list(bbar)
        images = images + list(bbar) + list(abar)
        C, theta_images = _glue(gens, images, m, check_a=inst)
        if C.rank != (inst.A + inst.B).rank:
            raise ObstructionError("enlarged_group_has_infinite_index", C=C)
    return SSystem(tuple(runs), S, C, theta_images, tuple(abar), tuple(bbar))


def extend_to_finite_order(inst: HnnInstance, choice: str = "strings") -> FiniteOrderExtension:
    """Finite-index K_bar <= K and a finite-order automorphism phi_bar extending phi."""
    _require_d_zero(inst)
    m = inst.ambient_rank
    N = complement_of_saturated(saturate(inst.A + inst.B))
    system = None
    if inst.AB.rank == 0:
        gens = list(N.basis) + list(inst.A.basis) + list(inst.B.basis)
        images = (list(N.basis) + [inst.phi.apply(a) for a in inst.A.basis]
                  + [inst.phi_inv.apply(b) for b in inst.B.basis])
    else:
        system = build_s_system(inst, choice=choice, check_d=False)
        gens = list(N.basis) + list(system.C.basis)
        images = list(N.basis) + list(system.theta_images)
    K_bar, theta_images = _glue(gens, images, m, check_a=inst)
    phi_bar = tuple(coordinates(K_bar, v) for v in theta_images)
    order = intmat.matrix_order(phi_bar)
    if order is None:
        raise ObstructionError("phi_bar_infinite_order", phi_bar=phi_bar)
    ext = FiniteOrderExtension(K_bar, phi_bar, order, N, index(Lattice.full(m), K_bar), system)
    verify_extension(inst, ext)
    return ext


def verify_extension(inst: HnnInstance, ext: FiniteOrderExtension):
    """Assert every FiniteOrderExtension invariant by direct computation."""
    m = inst.ambient_rank
    r = ext.K_bar.rank
    eye = intmat.identity(r)
    if ext.K_bar.rank != m:
        raise AssertionError("K_bar has infinite index")
    if intmat.matpow(ext.phi_bar, ext.order) != eye:
        raise AssertionError("phi_bar ** order != I")
    for j in range(1, ext.order):
        if intmat.matpow(ext.phi_bar, j) == eye:
            raise AssertionError("order is not minimal")
    if abs(intmat.det(ext.phi_bar)) != 1:
        raise AssertionError("phi_bar is not an automorphism")
    KA = ext.K_bar & inst.A
    for a in KA.basis:
        if ext.apply(a) != inst.phi.apply(a):
            raise AssertionError(f"phi_bar disagrees with phi at {a}")
    KB = ext.K_bar & inst.B
    if Lattice.span([ext.apply(a) for a in KA.basis], m) != KB:
        raise AssertionError("phi_bar(K_bar & A) != K_bar & B")


def root_overgroup(ext: FiniteOrderExtension, inst: HnnInstance | None = None) -> RootOvergroup:
    """X = (1/d) K_bar with d = [K : K_bar]; theta_X is phi_bar transported."""
    d = ext.index_in_K
    m = ext.K_bar.ambient_rank
    if not Lattice.span([intmat.scale(d, e) for e in intmat.identity(m)], m) <= ext.K_bar:
        raise AssertionError("d K is not contained in K_bar")
    X = RootOvergroup(ext.K_bar.basis, d, ext.phi_bar, d ** (m - 1))
    if inst is not None:
        for a in inst.A.basis:
            if X.theta(a) != tuple(Fraction(y) for y in inst.phi.apply(a)):
                raise AssertionError(f"theta_X disagrees with phi at {a}")
    return X
