"""Named instances and seeded random generators used by tests, demos and selftest."""

from __future__ import annotations

import random
from typing import Callable

from .hnn import HnnInstance, InvalidInstanceError
from .invariants import m_chain
from .lattice import Lattice


def bs(m: int, n: int) -> HnnInstance:
    """Baumslag-Solitar group: K = Z, t m t^-1 = n."""
    return HnnInstance.from_generators(1, [(m,)], [(n,)])


def swap() -> HnnInstance:
    return HnnInstance.from_generators(2, [(1, 0)], [(0, 1)])


def z3_shift() -> HnnInstance:
    return HnnInstance.from_generators(3, [(1, 0, 0), (0, 1, 0)], [(0, 1, 0), (0, 0, 1)])


def z4_replacement() -> HnnInstance:
    """e1 -> e2, 2e2 -> e3, e4 -> e1: orbit of e1 needs one power replacement."""
    return HnnInstance.from_generators(
        4, [(1, 0, 0, 0), (0, 2, 0, 0), (0, 0, 0, 1)],
        [(0, 1, 0, 0), (0, 0, 1, 0), (1, 0, 0, 0)])


def fixed_line() -> HnnInstance:
    """K = Z^2, A = B = <e1>, phi = identity."""
    return HnnInstance.from_generators(2, [(1, 0)], [(1, 0)])


def a_equals_k() -> HnnInstance:
    return HnnInstance.from_generators(1, [(1,)], [(2,)])


def semidirect() -> HnnInstance:
    """A = B = K = Z^2 with a hyperbolic automorphism."""
    return HnnInstance.from_generators(2, [(1, 0), (0, 1)], [(2, 1), (1, 1)])


def anosov_sub() -> HnnInstance:
    """A = B = 2Z^2 carrying a hyperbolic map; H = A, D = Z^2, index 4."""
    return HnnInstance.from_generators(2, [(2, 0), (0, 2)], [(4, 2), (2, 2)])


def mixed_nrf() -> HnnInstance:
    """e1 fixed, 2e2 -> 4e2: H = <e1> has infinite index in D = Z^2."""
    return HnnInstance.from_generators(2, [(1, 0), (0, 2)], [(1, 0), (0, 4)])


def torsion_bs() -> HnnInstance:
    """K = Z + Z/3, A = <2e1> + torsion, 2e1 -> 4e1 + e2."""
    return HnnInstance.from_generators(2, [(2, 0)], [(4, 1)], relations=[(0, 3)])


def torsion_swap() -> HnnInstance:
    """K = Z^2 + Z/2 with torsion fixed and e1 -> e2."""
    return HnnInstance.from_generators(3, [(1, 0, 0)], [(0, 1, 0)], relations=[(0, 0, 2)])


def disjoint_index2() -> HnnInstance:
    """A = <2e1>, B = <e2>; A & B = 0."""
    return HnnInstance.from_generators(2, [(2, 0)], [(0, 1)])


CURATED: dict[str, Callable[[], HnnInstance]] = {
    "bs_2_3": lambda: bs(2, 3),
    "bs_2_4": lambda: bs(2, 4),
    "bs_2_2": lambda: bs(2, 2),
    "bs_2_-2": lambda: bs(2, -2),
    "bs_3_3": lambda: bs(3, 3),
    "swap": swap,
    "z3_shift": z3_shift,
    "z4_replacement": z4_replacement,
    "fixed_line": fixed_line,
    "a_equals_k": a_equals_k,
    "semidirect": semidirect,
    "anosov_sub": anosov_sub,
    "mixed_nrf": mixed_nrf,
    "torsion_bs": torsion_bs,
    "torsion_swap": torsion_swap,
    "disjoint_index2": disjoint_index2,
}

# curated instances with D = 0 and a free base
CURATED_D0 = ("swap", "z3_shift", "z4_replacement", "disjoint_index2")


def curated() -> dict[str, HnnInstance]:
    return {name: f() for name, f in CURATED.items()}


def _random_generic(rng: random.Random, max_rank: int, bound: int) -> HnnInstance | None:
    m = rng.randint(2, max_rank)
    r = rng.randint(1, m - 1)
    a = [tuple(rng.randint(-bound, bound) for _ in range(m)) for _ in range(r)]
    b = [tuple(rng.randint(-bound, bound) for _ in range(m)) for _ in range(r)]
    if Lattice.span(a, m).rank < r or Lattice.span(b, m).rank < r:
        return None
    try:
        return HnnInstance.from_generators(m, a, b)
    except InvalidInstanceError:
        return None


def _random_strings(rng: random.Random, max_rank: int, bound: int) -> HnnInstance | None:
    """phi shifts along strings of a random basis, so orbits leave A & B by construction."""
    m = rng.randint(2, max_rank)
    lengths = []
    left = m
    while left:
        ell = rng.randint(1, left)
        lengths.append(ell)
        left -= ell
    if max(lengths) < 2:
        return None
    # basis: a signed permutation followed by one elementary operation
    perm = list(range(m))
    rng.shuffle(perm)
    basis = [[0] * m for _ in range(m)]
    for i, p in enumerate(perm):
        basis[i][p] = rng.choice((1, -1))
    i, j = rng.sample(range(m), 2)
    c = rng.choice((-1, 1))
    basis[i] = [x + c * y for x, y in zip(basis[i], basis[j])]
    a_gens, images = [], []
    pos = 0
    for ell in lengths:
        for k in range(ell - 1):
            s, s2 = rng.randint(1, 2), rng.randint(1, 2)
            a_gens.append(tuple(s * x for x in basis[pos + k]))
            images.append(tuple(s2 * x for x in basis[pos + k + 1]))
        pos += ell
    if any(abs(x) > bound for v in a_gens + images for x in v):
        return None
    return HnnInstance.from_generators(m, a_gens, images)


def random_d0_instances(seed: int, count: int, max_rank: int = 5,
                        bound: int = 3) -> list[HnnInstance]:
    """Seeded instances with a free base and D = 0, alternating two generators."""
    rng = random.Random(seed)
    out: list[HnnInstance] = []
    makers = (_random_generic, _random_strings)
    while len(out) < count:
        inst = makers[len(out) % 2](rng, max_rank, bound)
        if inst is None or m_chain(inst).D.rank:
            continue
        out.append(inst)
    return out


def random_instances(seed: int, count: int, max_rank: int = 4, bound: int = 3,
                     torsion: bool = False) -> list[HnnInstance]:
    """Seeded valid instances of any kind (D, H unrestricted)."""
    rng = random.Random(seed)
    out: list[HnnInstance] = []
    while len(out) < count:
        m = rng.randint(1, max_rank)
        r = rng.randint(1, m)
        a = [tuple(rng.randint(-bound, bound) for _ in range(m)) for _ in range(r)]
        b = [tuple(rng.randint(-bound, bound) for _ in range(m)) for _ in range(r)]
        rel = []
        if torsion and m >= 2 and rng.random() < 0.5:
            rel = [tuple(rng.randint(2, 3) if k == m - 1 else 0 for k in range(m))]
            a = a + rel
            b = b + rel
        if Lattice.span(a, m).rank < len(a) or Lattice.span(b, m).rank < len(b):
            continue
        try:
            out.append(HnnInstance.from_generators(m, a, b, relations=rel))
        except InvalidInstanceError:
            continue
    return out
