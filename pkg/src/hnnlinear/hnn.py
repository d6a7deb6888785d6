"""HNN-extensions G = <t, K | t a t^-1 = phi(a), a in A> over abelian K.

Words are reduced with Britton's lemma, which gives an exact word problem
solution and serves as an oracle for everything built downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

from . import intmat
from .intmat import Vector
from .lattice import (
    FgAbelianGroup,
    Lattice,
    SubgroupHom,
    hnf,
    member,
    reduce_mod,
)


class InvalidInstanceError(ValueError):
    """Instance data violates the HNN hypotheses; ``problems`` lists every violation."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class HnnInstance:
    base: FgAbelianGroup
    A: Lattice
    B: Lattice
    phi: SubgroupHom

    @classmethod
    def from_generators(cls, ambient_rank: int, a_gens: Sequence[Sequence[int]],
                        images: Sequence[Sequence[int]],
                        relations: Sequence[Sequence[int]] = (),
                        check: bool = True) -> "HnnInstance":
        """Build from arbitrary generators of A and their images under phi.

        Generators are canonicalized to the Hermite basis of A + L and the
        images are carried along by the same unimodular transform.
        """
        m = ambient_rank
        if len(a_gens) != len(images):
            raise InvalidInstanceError([f"phi lists {len(images)} images for {len(a_gens)} generators"])
        for v in list(a_gens) + list(images) + list(relations):
            if len(v) != m:
                raise InvalidInstanceError([f"vector {tuple(v)} has length {len(v)}, expected {m}"])
        L = Lattice.span(relations, m)
        base = FgAbelianGroup(m, L)
        # L's rows map to themselves, as required for a well-defined induced map
        gens = [tuple(v) for v in a_gens] + list(L.basis)
        imgs = [tuple(v) for v in images] + list(L.basis)
        A, u = hnf(gens, m)
        new_images = [intmat.vecmat(row, imgs, m) for row in u]
        problems = []
        for v in new_images[A.rank:]:
            if not member(L, v):
                problems.append(f"phi not well defined: a relation among A-generators maps to {v} outside L")
        B = Lattice.span(list(images) + list(L.basis), m)
        phi = SubgroupHom(A, B, tuple(new_images[:A.rank]), L)
        inst = cls(base, A, B, phi)
        if problems:
            raise InvalidInstanceError(problems + check_instance(inst))
        return validate(inst) if check else inst

    @property
    def ambient_rank(self) -> int:
        return self.base.ambient_rank

    @property
    def relations(self) -> Lattice:
        return self.base.relations

    @property
    def a_is_all(self) -> bool:
        return self.A.is_full

    @property
    def b_is_all(self) -> bool:
        return self.B.is_full

    @cached_property
    def phi_inv(self) -> SubgroupHom:
        return self.phi.inverse()

    @cached_property
    def AB(self) -> Lattice:
        return self.A & self.B


def check_instance(inst: HnnInstance) -> list[str]:
    """Every violated instance predicate, as human-readable strings."""
    out = []
    L = inst.relations
    m = inst.ambient_rank
    for name, lat in (("A", inst.A), ("B", inst.B)):
        if lat.ambient_rank != m:
            out.append(f"{name} has ambient rank {lat.ambient_rank}, expected {m}")
        elif not (L <= lat):
            out.append(f"relations not contained in {name}")
    if out:
        return out
    if inst.phi.domain != inst.A:
        out.append("phi domain differs from A")
    if inst.phi.codomain != inst.B:
        out.append("phi codomain differs from B")
    if inst.phi.relations != L:
        out.append("phi carries different relations from the base group")
    if out:
        return out
    return out + inst.phi.problems()


def validate(inst: HnnInstance) -> HnnInstance:
    problems = check_instance(inst)
    if problems:
        raise InvalidInstanceError(problems)
    return inst


# -- words ---------------------------------------------------------------

@dataclass(frozen=True)
class Stable:
    """Stable letter t_index ** exp with exp = +-1."""

    exp: int
    index: int = 0

    def __post_init__(self):
        if self.exp not in (1, -1):
            raise ValueError("stable letter exponent must be +1 or -1")

    def inverse(self) -> "Stable":
        return Stable(-self.exp, self.index)


@dataclass(frozen=True)
class Base:
    """Base-group element given by an ambient vector (a coset of L)."""

    vec: Vector

    def inverse(self) -> "Base":
        return Base(intmat.neg(self.vec))


Letter = Union[Stable, Base]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        fused: list[Letter] = []
        for x in self.letters:
            if isinstance(x, Base):
                if fused and isinstance(fused[-1], Base):
                    x = Base(intmat.add(fused.pop().vec, x.vec))
                if intmat.is_zero(x.vec):
                    continue
            fused.append(x)
        object.__setattr__(self, "letters", tuple(fused))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(x.inverse() for x in reversed(self.letters)))

    @property
    def t_length(self) -> int:
        return sum(isinstance(x, Stable) for x in self.letters)

    def __str__(self):
        parts = []
        for x in self.letters:
            if isinstance(x, Stable):
                name = "t" if x.index == 0 else f"t{x.index}"
                parts.append(name if x.exp == 1 else name + "^-1")
            else:
                parts.append("(" + ",".join(map(str, x.vec)) + ")")
        return " ".join(parts) if parts else "1"


def t(exp: int = 1, index: int = 0) -> Word:
    return Word((Stable(exp, index),))


def k(*vec: int) -> Word:
    return Word((Base(tuple(vec)),))


def word(*items: Union[Word, Letter, int, Sequence[int]]) -> Word:
    """Convenience constructor: ints are stable-letter exponents, sequences are base vectors."""
    letters: list[Letter] = []
    for it in items:
        if isinstance(it, Word):
            letters.extend(it.letters)
        elif isinstance(it, (Stable, Base)):
            letters.append(it)
        elif isinstance(it, int):
            letters.append(Stable(it))
        else:
            letters.append(Base(tuple(it)))
    return Word(tuple(letters))


def britton_reduce(inst: HnnInstance, w: Word) -> Word:
    """Remove every pinch t a t^-1 (a in A) and t^-1 b t (b in B).

    Single left-to-right pass with a syllable stack; each new adjacency of
    stable letters is checked once, which suffices because a pinch can only
    appear where a base syllable has just changed.
    """
    L = inst.relations
    m = inst.ambient_rank
    syllables: list[Vector] = [(0,) * m]
    stables: list[Stable] = []
    for x in w:
        if isinstance(x, Base):
            syllables[-1] = reduce_mod(L, intmat.add(syllables[-1], x.vec))
            continue
        if stables and stables[-1].index == x.index and stables[-1].exp == -x.exp:
            g = syllables[-1]
            repl = None
            if x.exp == -1 and member(inst.A, g):
                repl = inst.phi.apply(g)
            elif x.exp == 1 and member(inst.B, g):
                repl = inst.phi_inv.apply(g)
            if repl is not None:
                syllables.pop()
                stables.pop()
                syllables[-1] = reduce_mod(L, intmat.add(syllables[-1], repl))
                continue
        stables.append(x)
        syllables.append((0,) * m)
    letters: list[Letter] = [Base(syllables[0])]
    for s, g in zip(stables, syllables[1:]):
        letters.append(s)
        letters.append(Base(g))
    return Word(tuple(letters))


def is_identity(inst: HnnInstance, w: Word) -> bool:
    r = britton_reduce(inst, w)
    if r.t_length:
        return False
    return all(member(inst.relations, x.vec) for x in r)


def words_equal(inst: HnnInstance, u: Word, v: Word) -> bool:
    return is_identity(inst, u * v.inverse())


def d_membership_sample(inst: HnnInstance, x: Sequence[int], nu_bound: int = 3,
                        lambda_bound: int = 64) -> bool:
    """Sampled test of the defining property of D.

    True iff for every |nu| <= nu_bound some 1 <= lam <= lambda_bound puts
    t^-nu x^lam t^nu back into K (reduced t-length zero).
    """
    x = tuple(x)
    if member(inst.relations, x):
        return True
    for nu in range(-nu_bound, nu_bound + 1):
        conj = Word(tuple(Stable(-1 if nu > 0 else 1) for _ in range(abs(nu))))
        for lam in range(1, lambda_bound + 1):
            w = conj * Word((Base(intmat.scale(lam, x)),)) * conj.inverse()
            if britton_reduce(inst, w).t_length == 0:
                break
        else:
            return False
    return True


def random_word(rng, inst: HnnInstance, t_length: int, entry_bound: int = 3,
                base_prob: float = 0.8) -> Word:
    """Random word with exactly ``t_length`` stable letters (before reduction)."""
    m = inst.ambient_rank
    letters: list[Letter] = []

    def base():
        if rng.random() < base_prob:
            letters.append(Base(tuple(rng.randint(-entry_bound, entry_bound) for _ in range(m))))

    base()
    for _ in range(t_length):
        letters.append(Stable(rng.choice((1, -1))))
        base()
    return Word(tuple(letters))
