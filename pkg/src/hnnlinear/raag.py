"""From a finite-order extension to a right-angled Artin group of finite index.

The auxiliary group

    G~ = < xi_1..xi_n, zeta, K_bar | [e, e'], xi_i e xi_i^-1 = phi_bar(e), [zeta, a] >

receives G through t_i -> xi_i zeta. Sending every xi_i to 1 in Z/nu (nu the
order of phi_bar) defines a kernel of index nu whose Reidemeister-Schreier
presentation, after eliminating the conjugated copies of K_bar, consists of
commutators [g, w] with w in K_bar. When one basis of K_bar is adapted to
every centralized sublattice, these are commutators of generators and the
kernel is a right-angled Artin group.

Free-group words are tuples of ``(symbol, exponent)`` pairs with exponent +-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from . import intmat
from .finite_order import FiniteOrderExtension
from .hnn import Base, HnnInstance, Stable, Word
from .intmat import IntMatrix, Vector
from .lattice import (
    Lattice,
    LatticeError,
    complement_within,
    coordinates,
    index,
    inverse_unimodular,
    is_saturated,
    reduce_mod,
)

FreeWord = tuple[tuple[str, int], ...]

# Words spell vectors out letter by letter and the normal-closure step lists
# every coset, so both sizes are capped instead of exhausting memory.
MAX_RELATOR_LETTERS = 200_000
MAX_COSETS = 4096


class PipelineError(ValueError):
    """Inputs outside the pipeline's preconditions."""


def free_reduce(w: Sequence[tuple[str, int]]) -> FreeWord:
    out: list[tuple[str, int]] = []
    for s, e in w:
        if out and out[-1] == (s, -e):
            out.pop()
        else:
            out.append((s, e))
    return tuple(out)


def free_inverse(w: Sequence[tuple[str, int]]) -> FreeWord:
    return tuple((s, -e) for s, e in reversed(w))


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    return tuple(a) + tuple(b) + free_inverse(a) + free_inverse(b)


def vector_word(v: Sequence[int], names: Sequence[str]) -> FreeWord:
    """e_1^{v_1} ... e_r^{v_r} over the given generator names."""
    out = []
    for c, name in zip(v, names):
        out.extend([(name, 1 if c > 0 else -1)] * abs(c))
    return tuple(out)


def format_word(w: FreeWord) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        s, e = w[i]
        j = i
        while j < len(w) and w[j] == (s, e):
            j += 1
        p = (j - i) * e
        parts.append(s if p == 1 else f"{s}^{p}")
        i = j
    return " ".join(parts)


# -- the auxiliary group ---------------------------------------------------

@dataclass(frozen=True)
class GenInfo:
    name: str
    kind: str  # "K", "zeta", "xi", "xi-power", "xi-cross"
    level: int = 0


@dataclass(frozen=True)
class Presentation:
    generators: tuple[GenInfo, ...]
    relators: tuple[FreeWord, ...]
    phi_bar: IntMatrix
    nu: int
    n: int
    a_coords: tuple[Vector, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def rank(self) -> int:
        return len(self.phi_bar)

    def base_names(self) -> tuple[str, ...]:
        return tuple(f"e{i + 1}" for i in range(self.rank))

    def check(self):
        names = set(self.names)
        for r in self.relators:
            for s, e in r:
                if s not in names or e not in (1, -1):
                    raise AssertionError(f"relator letter {(s, e)} is not a declared generator")


def build_tilde(ext: FiniteOrderExtension, n: int, A: Lattice) -> Presentation:
    """Presentation of G~ with K_bar written in its own basis e1..er."""
    if n < 1:
        raise PipelineError("need at least one stable letter")
    if not A <= ext.K_bar:
        raise PipelineError("A is not contained in K_bar")
    a_coords = tuple(coordinates(ext.K_bar, a) for a in A.basis)
    return _tilde(ext.phi_bar, ext.order, n, a_coords)


def _tilde(phi_bar: IntMatrix, nu: int, n: int, a_coords) -> Presentation:
    r = len(phi_bar)
    letters = (4 * r * r + n * sum(2 + sum(abs(x) for x in row) for row in phi_bar)
               + sum(4 + 2 * sum(abs(x) for x in a) for a in a_coords))
    if letters > MAX_RELATOR_LETTERS:
        raise PipelineError(f"presentation would need about {letters} letters "
                            f"(limit {MAX_RELATOR_LETTERS}); phi_bar has large entries in this basis")
    es = tuple(f"e{i + 1}" for i in range(r))
    gens = [GenInfo(f"xi{i + 1}", "xi") for i in range(n)]
    gens.append(GenInfo("zeta", "zeta"))
    gens.extend(GenInfo(e, "K") for e in es)
    rels: list[FreeWord] = []
    for a in range(r):
        for b in range(a + 1, r):
            rels.append(commutator(((es[a], 1),), ((es[b], 1),)))
    for i in range(n):
        xi = f"xi{i + 1}"
        for a in range(r):
            rels.append(((xi, 1), (es[a], 1), (xi, -1)) + free_inverse(vector_word(phi_bar[a], es)))
    for a in a_coords:
        rels.append(commutator((("zeta", 1),), vector_word(a, es)))
    pres = Presentation(tuple(gens), tuple(rels), tuple(phi_bar), nu, n, tuple(a_coords))
    pres.check()
    return pres


def embed_g(ext: FiniteOrderExtension, w: Word) -> FreeWord:
    """Image of a word of G (or of the multiple extension over K_bar) in G~: t_i -> xi_i zeta."""
    es = tuple(f"e{i + 1}" for i in range(ext.K_bar.rank))
    out: list[tuple[str, int]] = []
    for x in w:
        if isinstance(x, Stable):
            xi = f"xi{x.index + 1}"
            out.extend([(xi, 1), ("zeta", 1)] if x.exp == 1 else [("zeta", -1), (xi, -1)])
        else:
            c = coordinates(ext.K_bar, x.vec)
            if c is None:
                raise PipelineError(f"base letter {x.vec} is not in K_bar; pass through normal_closure_data first")
            out.extend(vector_word(c, es))
    return tuple(out)


# -- passing to K_bar -------------------------------------------------------

@dataclass(frozen=True)
class NormalClosureData:
    representatives: tuple[Vector, ...]
    stable_words: tuple[Word, ...]
    instance: HnnInstance
    extension: FiniteOrderExtension
    n: int


def coset_representatives(sub: Lattice) -> tuple[Vector, ...]:
    """Representatives of Z^m / sub for a full-rank lattice, read off its Hermite basis."""
    m = sub.ambient_rank
    if sub.rank != m:
        raise PipelineError("sublattice has infinite index")
    d = index(Lattice.full(m), sub)
    if d > MAX_COSETS:
        raise PipelineError(f"index {d} exceeds the coset limit {MAX_COSETS}")
    diag = [sub.basis[i][i] for i in range(m)]
    return tuple(tuple(v) for v in product(*(range(d) for d in diag)))


def normal_closure_data(inst: HnnInstance, ext: FiniteOrderExtension) -> NormalClosureData:
    """Multiple HNN-extension over K_bar with stable letters t_i = k_i t k_i^-1.

    The new instance lives in K_bar coordinates: its base is Z^r, its
    associated subgroup is K_bar & A and every stable letter acts by phi.
    """
    reps = coset_representatives(ext.K_bar)
    if len(reps) != ext.index_in_K:
        raise AssertionError("coset count differs from the index")
    if len({reduce_mod(ext.K_bar, v) for v in reps}) != len(reps):
        raise AssertionError("coset representatives are not distinct modulo K_bar")
    stable_words = tuple(
        Word((Base(k), Stable(1), Base(intmat.neg(k)))) for k in reps)
    KA = ext.K_bar & inst.A
    a_c = [coordinates(ext.K_bar, a) for a in KA.basis]
    img_c = [coordinates(ext.K_bar, inst.phi.apply(a)) for a in KA.basis]
    r = ext.K_bar.rank
    new_inst = HnnInstance.from_generators(r, a_c, img_c)
    eye = Lattice.full(r)
    new_ext = FiniteOrderExtension(eye, ext.phi_bar, ext.order, Lattice.zero(r), 1)
    for a, b in zip(a_c, img_c):
        if new_ext.apply(a) != b:
            raise AssertionError("phi_bar does not extend phi on K_bar & A")
    return NormalClosureData(reps, stable_words, new_inst, new_ext, len(reps))


# -- Reidemeister-Schreier ------------------------------------------------

@dataclass(frozen=True)
class SchreierData:
    nu: int
    transversal: tuple[FreeWord, ...]
    generator_table: dict = field(compare=False)
    raw_relators: tuple[FreeWord, ...]
    rewritten_relators: tuple[FreeWord, ...]
    elimination_table: dict = field(compare=False)
    presentation: Presentation

    @property
    def retained_generators(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for name in self.generator_table:
            if name not in self.elimination_table:
                seen[name] = None
        return tuple(seen)

    def kernel_index(self) -> int:
        """Number of cosets reached from the trivial coset under the generator action."""
        reached = {0}
        frontier = [0]
        while frontier:
            j = frontier.pop()
            for g in self.presentation.names:
                for e in (1, -1):
                    k = _act(self.presentation, self.nu, j, g, e)
                    if k not in reached:
                        reached.add(k)
                        frontier.append(k)
        return len(reached)


def _act(pres: Presentation, nu: int, j: int, g: str, e: int) -> int:
    return (j + e) % nu if g.startswith("xi") else j


def _schreier_symbol(pres: Presentation, nu: int, j: int, g: str) -> str | None:
    if g == "xi1":
        return "z" if j == nu - 1 else None
    if g.startswith("xi"):
        return f"x{g[2:]}_{j}"
    if g == "zeta":
        return f"zeta{j}"
    return f"{g}@{j}"


def _rewrite(pres: Presentation, nu: int, w: FreeWord, j: int) -> tuple[FreeWord, int]:
    out = []
    for g, e in w:
        if e == 1:
            sym = _schreier_symbol(pres, nu, j, g)
            j = _act(pres, nu, j, g, 1)
        else:
            j = _act(pres, nu, j, g, -1)
            sym = _schreier_symbol(pres, nu, j, g)
        if sym is not None:
            out.append((sym, e))
    return tuple(out), j


def schreier_rewrite(pres: Presentation, nu: int | None = None) -> SchreierData:
    """Kernel of G~ -> Z/nu (every xi_i -> 1) on the transversal 1, xi1, ..., xi1^(nu-1)."""
    nu = pres.nu if nu is None else nu
    if nu < 1:
        raise PipelineError("nu must be positive")
    transversal = tuple((("xi1", 1),) * j for j in range(nu))
    table: dict[str, FreeWord] = {}
    for j in range(nu):
        for g in pres.names:
            sym = _schreier_symbol(pres, nu, j, g)
            if sym is None:
                continue
            k = _act(pres, nu, j, g, 1)
            table[sym] = free_reduce(transversal[j] + ((g, 1),) + free_inverse(transversal[k]))
    raw = []
    for rel in pres.relators:
        for j in range(nu):
            w, end = _rewrite(pres, nu, rel, j)
            if end != j:
                raise AssertionError(f"relator {format_word(rel)} is not in the kernel")
            raw.append(free_reduce(w))
    r = pres.rank
    es = pres.base_names()
    elim: dict[str, Vector] = {}
    power = intmat.identity(r)
    for j in range(nu):
        for a in range(r):
            elim[f"{es[a]}@{j}"] = power[a]
        power = intmat.matmul(power, pres.phi_bar)
    if power != intmat.identity(r) and nu == pres.nu:
        raise AssertionError("phi_bar ** nu is not the identity")
    _check_elimination(pres, nu, elim)
    rewritten = []
    for w in raw:
        out: list[tuple[str, int]] = []
        for s, e in w:
            if s in elim:
                piece = vector_word(elim[s], es)
                out.extend(piece if e == 1 else free_inverse(piece))
            else:
                out.append((s, e))
        rewritten.append(free_reduce(out))
    elim_table = {k: v for k, v in elim.items() if not k.endswith("@0")}
    # level-0 copies keep the names e1..er
    table = {(k[:-2] if k.endswith("@0") and k[:-2] in es else k): v for k, v in table.items()}
    return SchreierData(nu, transversal, table, tuple(raw), tuple(rewritten), elim_table, pres)


def _check_elimination(pres: Presentation, nu: int, elim: dict[str, Vector]):
    """e^(j) = phi_bar(e)^(j-1) for 1 <= j < nu, substituted back, must hold exactly."""
    es = pres.base_names()
    for j in range(1, nu):
        for a in range(pres.rank):
            lhs = elim[f"{es[a]}@{j}"]
            rhs = [0] * pres.rank
            for b, c in enumerate(pres.phi_bar[a]):
                rhs = intmat.add(rhs, intmat.scale(c, elim[f"{es[b]}@{j - 1}"]))
            if tuple(rhs) != lhs:
                raise AssertionError(f"elimination of {es[a]}@{j} is inconsistent")


# -- certification ----------------------------------------------------------

@dataclass(frozen=True)
class RaagGraph:
    vertices: tuple[str, ...]
    edges: frozenset

    def adjacent(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def edge_list(self) -> list[tuple[str, str]]:
        order = {v: i for i, v in enumerate(self.vertices)}
        return sorted((tuple(sorted(e, key=order.get)) for e in self.edges),
                      key=lambda p: (order[p[0]], order[p[1]]))


@dataclass(frozen=True)
class RaagCertificate:
    outcome: str  # "Raag" or "Obstructed"
    graph: RaagGraph | None = None
    basis: IntMatrix | None = None
    translation: dict = field(default_factory=dict, compare=False)
    offending: tuple[str, ...] = ()

    @property
    def is_raag(self) -> bool:
        return self.outcome == "Raag"


def _syllables(w: FreeWord, es: Sequence[str]):
    """Collect runs of K_bar letters into vectors; other letters stay single."""
    idx = {e: i for i, e in enumerate(es)}
    r = len(es)
    out: list = []
    for s, e in w:
        if s in idx:
            v = [0] * r
            v[idx[s]] = e
            if out and out[-1][0] == "v":
                v = intmat.add(out.pop()[1], v)
            if any(v):
                out.append(("v", tuple(v)))
        else:
            if out and out[-1] == ("g", s, -e):
                out.pop()
            else:
                out.append(("g", s, e))
        # a cancelled pair may expose two adjacent vectors
        if len(out) >= 2 and out[-1][0] == "v" and out[-2][0] == "v":
            v = intmat.add(out.pop()[1], out.pop()[1])
            if any(v):
                out.append(("v", tuple(v)))
    # cyclic reduction
    changed = True
    while changed and len(out) >= 2:
        changed = False
        first, last = out[0], out[-1]
        if first[0] == "v" and last[0] == "v":
            v = intmat.add(first[1], last[1])
            out = ([("v", tuple(v))] if any(v) else []) + out[1:-1]
            changed = True
        elif first[0] == "g" and last == ("g", first[1], -first[2]):
            out = out[1:-1]
            changed = True
    return out


def _as_commutator(syl) -> tuple[str, Vector] | None:
    if len(syl) != 4:
        return None
    for i in range(4):
        a, b, c, d = (syl[(i + k) % 4] for k in range(4))
        if a[0] == "g" and b[0] == "v" and c == ("g", a[1], -a[2]) and d[0] == "v" \
                and intmat.neg(b[1]) == d[1]:
            return a[1], b[1]
    return None


def _adapted_basis(r: int, lattices: Sequence[Lattice]) -> IntMatrix | None:
    """A basis of Z^r in which every lattice is spanned by a subset of basis vectors."""
    eye = intmat.identity(r)
    if all(Lattice.span([e for e in eye if lat.__contains__(e)], r) == lat for lat in lattices):
        return eye
    family = [Lattice.full(r)]
    for lat in lattices:
        for x in list(family):
            y = x & lat
            if y not in family:
                family.append(y)
    basis: list[Vector] = []
    for x in family:
        below = Lattice.zero(r)
        for y in family:
            if y != x and y <= x:
                below = below + y
        try:
            basis.extend(complement_within(x, below).basis)
        except LatticeError:
            return None
    if len(basis) != r or abs(intmat.det(basis)) != 1:
        return None
    for lat in lattices:
        if Lattice.span([b for b in basis if b in lat], r) != lat:
            return None
    return tuple(basis)


def _vertex_key(name: str):
    if name == "z":
        return (0, 0, 0)
    if name.startswith("zeta"):
        return (2, int(name[4:]), 0)
    i, j = name[1:].split("_")
    return (1, int(i), int(j))


def certify_raag(data: SchreierData) -> RaagCertificate:
    """Try to read the kernel presentation as a right-angled Artin group."""
    pres = data.presentation
    es = pres.base_names()
    r = pres.rank
    constraints: dict[str, list[Vector]] = {}
    offending: list[str] = []
    for w in data.rewritten_relators:
        syl = _syllables(w, es)
        if not syl:
            continue
        comm = _as_commutator(syl)
        if comm is None:
            offending.append(format_word(w))
            continue
        constraints.setdefault(comm[0], []).append(comm[1])
    lattices = {g: Lattice.span(vs, r) for g, vs in constraints.items()}
    for g, lat in lattices.items():
        if not is_saturated(lat):
            offending.extend(f"[{g}, {format_word(vector_word(v, es))}]" for v in constraints[g])
    basis = None
    if not offending:
        basis = _adapted_basis(r, list(lattices.values()))
        if basis is None:
            eye = set(intmat.identity(r)) | {intmat.neg(e) for e in intmat.identity(r)}
            for g, vs in constraints.items():
                offending.extend(f"[{g}, {format_word(vector_word(v, es))}]" for v in vs if v not in eye)
    if offending:
        return RaagCertificate("Obstructed", offending=tuple(offending))
    standard = basis == intmat.identity(r)
    bnames = list(es) if standard else [f"b{i + 1}" for i in range(r)]
    others = sorted((g for g in data.retained_generators if g not in es), key=_vertex_key)
    vertices = tuple(bnames + others)
    edges = set()
    for a in range(r):
        for b in range(a + 1, r):
            edges.add(frozenset((bnames[a], bnames[b])))
    for g, lat in lattices.items():
        for name, vec in zip(bnames, basis):
            if vec in lat:
                edges.add(frozenset((g, name)))
    inv = inverse_unimodular(basis)
    translation = {g: ((g, 1),) for g in others}
    for a in range(r):
        translation[es[a]] = vector_word(inv[a], bnames)
    return RaagCertificate("Raag", RaagGraph(vertices, frozenset(edges)), basis, translation)
