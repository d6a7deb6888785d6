"""Quick seeded checks behind ``hnnlinear selftest``.

These are reduced versions of the acceptance criteria; the full-size runs
live in the test suite.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from . import suite
from .finite_order import extend_to_finite_order, orbit_run
from .hnn import britton_reduce, random_word
from .invariants import Verdict, decide, m_chain, quotient_by_H
from .io import InstanceRecord
from .lattice import Lattice, index, intersect, lattice_sum, saturate
from .oracles import SpanOracle, box, index_oracle
from .pipeline import run_pipeline


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")


def _lattice_oracle(rng: random.Random, cases: int) -> str | None:
    for case in range(cases):
        m = rng.randint(1, 3)
        g1 = [tuple(rng.randint(-5, 5) for _ in range(m)) for _ in range(rng.randint(0, 3))]
        g2 = [tuple(rng.randint(-5, 5) for _ in range(m)) for _ in range(rng.randint(0, 3))]
        l1, l2 = Lattice.span(g1, m), Lattice.span(g2, m)
        o1, o2 = SpanOracle(g1, m), SpanOracle(g2, m)
        s, i, sat = lattice_sum(l1, l2), intersect(l1, l2), saturate(l1)
        o12 = SpanOracle(g1 + g2, m)
        for v in box(m, 4):
            if (v in s) != (v in o12) or (v in i) != (v in o1 and v in o2) \
                    or (v in sat) != o1.in_rational_span(v):
                return f"case {case}: mismatch at {v}"
        if index(s, l1) != index_oracle(g1 + g2, g1, m):
            return f"case {case}: index mismatch"
    return None


def _bs_grid() -> str | None:
    for m in range(2, 7):
        for n in list(range(2, 7)) + list(range(-6, -1)):
            v = decide(suite.bs(m, n)).verdict
            if (v is Verdict.Z_LINEAR) != (abs(m) == abs(n)):
                return f"BS({m},{n}) gave {v.value}"
    return None


def _special_cases() -> str | None:
    r = decide(suite.fixed_line())
    if r.verdict is not Verdict.Z_LINEAR or r.D != r.H or r.index_D_over_H != 1:
        return "fixed_line instance"
    if decide(suite.a_equals_k()).verdict is not Verdict.Q_LINEAR_NOT_Z_LINEAR:
        return "A = K instance"
    return None


def _z4() -> str | None:
    inst = suite.z4_replacement()
    run = orbit_run(inst, (1, 0, 0, 0))
    ext = extend_to_finite_order(inst)
    if (len(run.replacements), run.lam, run.mu, len(run.S_bar), ext.index_in_K, ext.order) != (1, 1, 2, 4, 8, 4):
        return f"got run {run} and extension index {ext.index_in_K}, order {ext.order}"
    return None


def _swap_pipeline(rng: random.Random, words: int) -> str | None:
    inst = suite.swap()
    res = run_pipeline(inst)
    rep = res.representation
    if res.schreier.kernel_index() != 2 or rep is None or rep.dimension != 20:
        return "swap pipeline shape"
    found = 0
    while found < words:
        w = random_word(rng, inst, rng.randint(1, 6))
        if britton_reduce(inst, w).t_length == 0:
            continue
        found += 1
        if rep.image(w).is_identity():
            return f"nontrivial word {w} maps to the identity"
    for _ in range(words):
        u = random_word(rng, inst, rng.randint(0, 6))
        v = random_word(rng, inst, rng.randint(0, 6))
        if rep.image(britton_reduce(inst, u * v)) != rep.image(u) @ rep.image(v):
            return "homomorphism property"
    return None


def _chain_guard() -> str | None:
    for name, inst in suite.curated().items():
        rep = m_chain(inst)
        if saturate(rep.chain[rep.k]) != saturate(rep.chain[rep.k + 3]):
            return name
    return None


def _random_extensions(seed: int, count: int) -> str | None:
    for inst in suite.random_d0_instances(seed, count):
        extend_to_finite_order(inst)
    return None


def _quotients() -> str | None:
    for name, inst in suite.curated().items():
        if inst.a_is_all or inst.b_is_all:
            continue
        v = decide(inst)
        if v.index_D_over_H < math.inf and decide(quotient_by_H(inst, v.H)).verdict is not Verdict.Z_LINEAR:
            return name
    return None


def _records(records: list[InstanceRecord]) -> str | None:
    for k, rec in enumerate(records):
        inst = rec.instance
        v = decide(inst)
        if inst.base.is_free and v.D.rank == 0:
            extend_to_finite_order(inst)
        for name, w in rec.words.items():
            r = britton_reduce(inst, w)
            if britton_reduce(inst, r) != r:
                return f"instance {k}: word {name} is not stable under reduction"
    return None


def run_selftest(seed: int = 0, records: list[InstanceRecord] | None = None) -> list[CheckResult]:
    rng = random.Random(seed)
    checks: list[tuple[str, Callable[[], str | None]]] = [
        ("lattice operations vs brute force", lambda: _lattice_oracle(rng, 100)),
        ("Baumslag-Solitar grid", _bs_grid),
        ("fixed_line and A = K instances", _special_cases),
        ("Z^4 replacement example", _z4),
        ("swap instance representation", lambda: _swap_pipeline(rng, 100)),
        ("chain guard on curated suite", _chain_guard),
        ("random D = 0 extensions", lambda: _random_extensions(seed, 30)),
        ("quotients by H are Z-linear", _quotients),
    ]
    if records:
        checks.append(("instances from file", lambda: _records(records)))
    out = []
    for name, fn in checks:
        try:
            err = fn()
        except Exception as exc:  # report, never crash the summary
            err = f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, err is None, err or ""))
    return out
