"""Integer matrix representations: RAAG -> Coxeter doubling -> induction -> G.

All arithmetic uses numpy arrays of Python ints (dtype=object) so entries
never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import intmat
from .finite_order import FiniteOrderExtension
from .hnn import Stable, Word
from .lattice import inverse_unimodular
from .raag import (
    FreeWord,
    PipelineError,
    RaagCertificate,
    RaagGraph,
    SchreierData,
    _act,
    _schreier_symbol,
    embed_g,
)


def int_eye(n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=object)
    for i in range(n):
        m[i, i] = 1
    return m


def as_object(rows) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in rows], dtype=object)


def mat_power(m: np.ndarray, e: int, inv: np.ndarray | None = None) -> np.ndarray:
    if e < 0:
        if inv is None:
            raise ValueError("negative power needs the inverse")
        m, e = inv, -e
    out = int_eye(m.shape[0])
    base = m
    while e:
        if e & 1:
            out = out.dot(base)
        e >>= 1
        if e:
            base = base.dot(base)
    return out


def is_identity(m: np.ndarray) -> bool:
    return bool(np.array_equal(m, int_eye(m.shape[0])))


def int_det(m: np.ndarray) -> int:
    return intmat.det(tuple(tuple(int(x) for x in row) for row in m))


@dataclass
class MatrixRep:
    """Images of named generators (and their inverses) as integer matrices."""

    dimension: int
    images: dict
    inverses: dict
    metadata: dict = field(default_factory=dict)

    def letter(self, s: str, e: int) -> np.ndarray:
        return self.images[s] if e == 1 else self.inverses[s]

    def word_image(self, w: FreeWord) -> np.ndarray:
        out = int_eye(self.dimension)
        for s, e in w:
            out = out.dot(self.letter(s, e))
        return out


def coxeter_form(graph: RaagGraph) -> tuple[list[str], np.ndarray]:
    """Doubled Coxeter vertex list and its bilinear form (1 / 0 / -1)."""
    names: list[str] = []
    for v in graph.vertices:
        names.extend((f"{v}'", f"{v}''"))
    n = len(names)
    B = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            if i == j:
                B[i, j] = 1
                continue
            u, v = graph.vertices[i // 2], graph.vertices[j // 2]
            B[i, j] = 0 if (u != v and graph.adjacent(u, v)) else -1
    return names, B


def raag_to_matrices(graph: RaagGraph) -> MatrixRep:
    """Vertex v -> s_{v'} s_{v''} in the geometric representation of the doubled Coxeter group."""
    names, B = coxeter_form(graph)
    n = len(names)
    refl = []
    for s in range(n):
        m = int_eye(n)
        for t in range(n):
            m[s, t] -= 2 * B[s, t]
        refl.append(m)
    images, inverses = {}, {}
    for k, v in enumerate(graph.vertices):
        a, b = refl[2 * k], refl[2 * k + 1]
        images[v] = a.dot(b)
        inverses[v] = b.dot(a)
    rep = MatrixRep(n, images, inverses, {"coxeter_vertices": names, "coxeter_form": B,
                                         "reflections": refl})
    verify_raag_rep(graph, rep)
    return rep


def verify_raag_rep(graph: RaagGraph, rep: MatrixRep):
    for v in graph.vertices:
        if abs(int_det(rep.images[v])) != 1:
            raise AssertionError(f"image of {v} is not unimodular")
        if not is_identity(rep.images[v].dot(rep.inverses[v])):
            raise AssertionError(f"stored inverse of {v} is wrong")
    for u, v in graph.edge_list():
        w = ((u, 1), (v, 1), (u, -1), (v, -1))
        if not is_identity(rep.word_image(w)):
            raise AssertionError(f"commutator [{u}, {v}] is not mapped to the identity")


@dataclass(frozen=True)
class BlockMonomial:
    """Block matrix with exactly one nonzero block per block row: row i sits in column perm[i]."""

    perm: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]

    def __matmul__(self, other: "BlockMonomial") -> "BlockMonomial":
        perm = tuple(other.perm[p] for p in self.perm)
        blocks = tuple(b.dot(other.blocks[p]) for b, p in zip(self.blocks, self.perm))
        return BlockMonomial(perm, blocks)

    @classmethod
    def identity(cls, nu: int, d: int) -> "BlockMonomial":
        return cls(tuple(range(nu)), tuple(int_eye(d) for _ in range(nu)))

    @property
    def block_size(self) -> int:
        return self.blocks[0].shape[0]

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and all(is_identity(b) for b in self.blocks)

    def trace(self) -> int:
        return sum(int(np.trace(b)) for i, (b, p) in enumerate(zip(self.blocks, self.perm)) if p == i)

    def to_dense(self) -> np.ndarray:
        nu, d = len(self.perm), self.block_size
        out = np.zeros((nu * d, nu * d), dtype=object)
        for i, (b, p) in enumerate(zip(self.blocks, self.perm)):
            out[i * d:(i + 1) * d, p * d:(p + 1) * d] = b
        return out

    def __eq__(self, other):
        return isinstance(other, BlockMonomial) and self.perm == other.perm and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))

    __hash__ = None


class InducedRepresentation:
    """Representation of G~ induced from the kernel, restricted along t_i -> xi_i zeta."""

    def __init__(self, kernel_rep: MatrixRep, data: SchreierData, cert: RaagCertificate,
                 ext: FiniteOrderExtension):
        if not cert.is_raag:
            raise PipelineError("certificate is Obstructed; no representation")
        self.kernel_rep = kernel_rep
        self.data = data
        self.cert = cert
        self.ext = ext
        self.nu = data.nu
        self.pres = data.presentation
        self._vec_cache: dict = {}
        self._sym_cache: dict = {}
        self._gen_cache: dict = {}
        inv_basis = inverse_unimodular(cert.basis)
        self._to_adapted = inv_basis
        self._base_vertices = cert.graph.vertices[:self.pres.rank]

    @property
    def dimension(self) -> int:
        return self.nu * self.kernel_rep.dimension

    def kernel_vector(self, v: Sequence[int]) -> np.ndarray:
        """Kernel image of the level-0 K_bar element with coordinates v."""
        v = tuple(v)
        if v not in self._vec_cache:
            d = intmat.vecmat(v, self._to_adapted)
            out = int_eye(self.kernel_rep.dimension)
            for c, name in zip(d, self._base_vertices):
                if c:
                    out = out.dot(mat_power(self.kernel_rep.images[name], c,
                                            self.kernel_rep.inverses[name]))
            self._vec_cache[v] = out
        return self._vec_cache[v]

    def _symbol(self, sym: str | None) -> np.ndarray:
        if sym is None:
            return int_eye(self.kernel_rep.dimension)
        if sym not in self._sym_cache:
            base = self.pres.base_names()
            if "@" in sym:
                name, level = sym.split("@")
                vec = intmat.vecmat(intmat.identity(self.pres.rank)[base.index(name)],
                                    intmat.matpow(self.pres.phi_bar, int(level)))
                self._sym_cache[sym] = self.kernel_vector(vec)
            else:
                self._sym_cache[sym] = self.kernel_rep.images[sym]
        return self._sym_cache[sym]

    def generator(self, g: str, e: int = 1) -> BlockMonomial:
        """Induced image of a G~ generator: block (i, i.g) is the kernel image of u_i g u_{i.g}^-1."""
        key = (g, e)
        if key not in self._gen_cache:
            perm, blocks = [], []
            for i in range(self.nu):
                if e == 1:
                    j = _act(self.pres, self.nu, i, g, 1)
                    blk = self._symbol(_schreier_symbol(self.pres, self.nu, i, g))
                else:
                    j = _act(self.pres, self.nu, i, g, -1)
                    blk = _inverse_block(self._symbol(_schreier_symbol(self.pres, self.nu, j, g)))
                perm.append(j)
                blocks.append(blk)
            self._gen_cache[key] = BlockMonomial(tuple(perm), tuple(blocks))
        return self._gen_cache[key]

    def identity(self) -> BlockMonomial:
        return BlockMonomial.identity(self.nu, self.kernel_rep.dimension)

    def tilde_image(self, w: FreeWord) -> BlockMonomial:
        out = self.identity()
        for g, e in w:
            out = out @ self.generator(g, e)
        return out

    def base_image(self, coords: Sequence[int]) -> BlockMonomial:
        """Image of a K_bar element (coordinates in the K_bar basis); block diagonal."""
        phi = self.pres.phi_bar
        blocks = []
        v = tuple(coords)
        for _ in range(self.nu):
            blocks.append(self.kernel_vector(v))
            v = intmat.vecmat(v, phi)
        return BlockMonomial(tuple(range(self.nu)), tuple(blocks))

    def image(self, w: Word) -> BlockMonomial:
        """Image of a word of G (or of the multiple extension over K_bar)."""
        out = self.identity()
        for x in w:
            if isinstance(x, Stable):
                key = ("t", x.index, x.exp)
                if key not in self._gen_cache:
                    self._gen_cache[key] = self.tilde_image(embed_g(self.ext, Word((x,))))
                out = out @ self._gen_cache[key]
            else:
                c = self.ext.coords(x.vec)
                out = out @ self.base_image(c)
        return out

    def dense(self, w: Word) -> np.ndarray:
        return self.image(w).to_dense()


def _inverse_block(m: np.ndarray) -> np.ndarray:
    rows = tuple(tuple(int(x) for x in row) for row in m)
    return as_object(inverse_unimodular(rows))


def induce_and_restrict(kernel_rep: MatrixRep, data: SchreierData, cert: RaagCertificate,
                        ext: FiniteOrderExtension) -> InducedRepresentation:
    rep = InducedRepresentation(kernel_rep, data, cert, ext)
    for rel in data.presentation.relators:
        if not rep.tilde_image(rel).is_identity():
            raise AssertionError("a relator of G~ is not mapped to the identity")
    return rep
