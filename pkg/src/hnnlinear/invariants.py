"""The subgroups D and H of the base group, and the linearity verdict.

D is the isolator of the M-chain at its first rank stall. H, the largest
subgroup with phi(H) = H, is found by exact linear algebra: on the stable
rational span, phi becomes a rational automorphism psi; an invariant
full-rank lattice can only live in the primary components whose
irreducible factors are algebraic units, so H sits inside M_k intersected
with the sum W of those components, where a finite refinement chain pins
it down exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import intmat, rational
from .hnn import HnnInstance
from .intmat import RatMatrix, Vector
from .lattice import (
    Lattice,
    complement_of_saturated,
    index,
    inverse_unimodular,
    saturate,
    solve,
)
from .polys import factor_rational_poly, is_unit_factor, primitive_part

CHAIN_GUARD_STEPS = 3


class ChainGuardError(AssertionError):
    """The M-chain's isolator moved after the first rank stall."""


@dataclass(frozen=True)
class MChainReport:
    chain: tuple[Lattice, ...]
    k: int
    D: Lattice
    V_basis: tuple[Vector, ...]
    psi: RatMatrix

    @property
    def M_k(self) -> Lattice:
        return self.chain[self.k]


@dataclass(frozen=True)
class HReport:
    char_poly: tuple[int, ...]
    factors: tuple[tuple[tuple[int, ...], int, bool], ...]
    W_basis: tuple[Vector, ...]
    H: Lattice
    n_chain: tuple[Lattice, ...]


class Verdict(enum.Enum):
    Z_LINEAR = "ZLinear"
    Q_LINEAR_NOT_Z_LINEAR = "QLinearNotZLinear"
    NOT_RESIDUALLY_FINITE = "NotResiduallyFinite"


@dataclass(frozen=True)
class LinearityVerdict:
    verdict: Verdict
    D: Lattice
    H: Lattice
    rank_D: int
    rank_H: int
    index_D_over_H: int | float
    case_flags: dict = field(default_factory=dict)

    @property
    def is_z_linear(self) -> bool:
        return self.verdict is Verdict.Z_LINEAR


def _m_step(inst: HnnInstance, M: Lattice) -> Lattice:
    return inst.phi.preimage(M) & M & inst.phi.image(M)


class _FreeQuotient:
    """Coordinates on K / torsion = Z^m / saturate(L)."""

    def __init__(self, inst: HnnInstance):
        m = inst.ambient_rank
        self.torsion = saturate(inst.relations)
        comp = complement_of_saturated(self.torsion)
        self.s = self.torsion.rank
        self.dim = m - self.s
        self.q_inv = inverse_unimodular(self.torsion.basis + comp.basis)

    def project(self, v) -> Vector:
        return intmat.vecmat(v, self.q_inv)[self.s:]


def m_chain(inst: HnnInstance, guard_steps: int = CHAIN_GUARD_STEPS) -> MChainReport:
    """M_0 = A & B, M_{i+1} = phi^-1(M_i) & M_i & phi(M_i), up to the first rank stall."""
    chain = [inst.AB]
    while True:
        nxt = _m_step(inst, chain[-1])
        chain.append(nxt)
        if nxt.rank == chain[-2].rank:
            break
    k = len(chain) - 2
    while len(chain) < k + 1 + guard_steps:
        chain.append(_m_step(inst, chain[-1]))
    D = saturate(chain[k])
    if saturate(chain[k + guard_steps]) != D:
        raise ChainGuardError(
            f"isolator of M_{k} differs from that of M_{k + guard_steps}: "
            f"{D} vs {saturate(chain[k + guard_steps])}")
    V_basis, psi = _stable_span_map(inst, chain[k])
    return MChainReport(tuple(chain), k, D, V_basis, psi)


def _stable_span_map(inst: HnnInstance, M_k: Lattice):
    fq = _FreeQuotient(inst)
    m = inst.ambient_rank
    proj_rows = [fq.project(row) for row in M_k.basis]
    P = Lattice.span(proj_rows, fq.dim) if fq.dim else Lattice.zero(0)
    V_basis = []
    for p in P.basis:
        x = solve(proj_rows, p)
        V_basis.append(intmat.vecmat(x, M_k.basis, m))
    rows = []
    for y in V_basis:
        img = fq.project(inst.phi.apply(y))
        coords = rational.solve_left(P.basis, img)
        if coords is None:
            raise AssertionError("phi does not preserve the stable rational span")
        rows.append(coords)
    psi = RatMatrix.from_fractions(rows) if rows else RatMatrix(())
    return tuple(V_basis), psi


def compute_H(inst: HnnInstance, report: MChainReport | None = None,
              max_steps: int = 10_000) -> HReport:
    """Largest subgroup H of K with phi(H) = H."""
    if report is None:
        report = m_chain(inst)
    m = inst.ambient_rank
    fq = _FreeQuotient(inst)
    psi = report.psi.to_fractions()
    r = len(psi)
    if r:
        cp = rational.charpoly(psi)
        char_poly = primitive_part(cp)
        raw_factors = factor_rational_poly(cp)
    else:
        char_poly, raw_factors = (1,), []
    factors = []
    w_rows: list[list[Fraction]] = []
    for f, mult in raw_factors:
        unit = is_unit_factor(f)
        factors.append((f, mult, unit))
        if unit:
            fpow = rational.poly_at_matrix(_poly_pow(f, mult), psi)
            w_rows.extend(rational.left_nullspace(fpow))
    W_basis = []
    for w in w_rows:
        amb = [sum((c * x for c, x in zip(w, col)), Fraction(0)) for col in zip(*report.V_basis)]
        den = math.lcm(*(x.denominator for x in amb)) if amb else 1
        W_basis.append(tuple(int(x * den) for x in amb))
    W_lat = saturate(Lattice.span(W_basis + list(fq.torsion.basis), m))
    N = report.M_k & W_lat
    n_chain = [N]
    for _ in range(max_steps):
        nxt = N & inst.phi.image(N) & inst.phi.preimage(N)
        if nxt == N:
            break
        N = nxt
        n_chain.append(N)
    else:
        raise AssertionError("invariant refinement chain did not stabilize")
    H = N
    if inst.phi.image(H) != H:
        raise AssertionError("computed H is not phi-invariant")
    if not H <= report.D:
        raise AssertionError("computed H is not contained in D")
    return HReport(char_poly, tuple(factors), tuple(W_basis), H, tuple(n_chain))


def _poly_pow(f, e):
    out = [1]
    for _ in range(e):
        nxt = [0] * (len(out) + len(f) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(f):
                nxt[i + j] += a * b
        out = nxt
    return out


def quotient_by_H(inst: HnnInstance, H: Lattice) -> HnnInstance:
    """The induced HNN-extension over K/H (H must satisfy phi(H) = H)."""
    if not (H <= inst.A) or inst.phi.image(H) != H:
        raise ValueError("H is not phi-invariant")
    m = inst.ambient_rank
    L2 = inst.relations + H
    images = [inst.phi.apply(row) for row in inst.A.basis]
    return HnnInstance.from_generators(m, inst.A.basis, images, L2.basis)


def decide(inst: HnnInstance) -> LinearityVerdict:
    report = m_chain(inst)
    hrep = compute_H(inst, report)
    D, H = report.D, hrep.H
    idx = index(D, H)
    L_rank = inst.relations.rank
    flags = {
        "a_is_all": inst.a_is_all,
        "b_is_all": inst.b_is_all,
        "semidirect_product": inst.a_is_all and inst.b_is_all,
        "torsion_free_base": inst.base.is_free,
        "k": report.k,
    }
    if inst.a_is_all and inst.b_is_all:
        v = Verdict.Z_LINEAR
    elif inst.a_is_all or inst.b_is_all:
        v = Verdict.Q_LINEAR_NOT_Z_LINEAR
    elif idx < math.inf:
        v = Verdict.Z_LINEAR
    else:
        v = Verdict.NOT_RESIDUALLY_FINITE
    return LinearityVerdict(v, D, H, D.rank - L_rank, H.rank - L_rank, idx, flags)
