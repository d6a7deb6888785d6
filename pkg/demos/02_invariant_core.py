"""D, H and the verdict on rank-two examples.

D collects the elements whose powers survive conjugation by every power of
t; H is the largest subgroup mapped onto itself. Finite index of H in D is
exactly what makes the group Z-linear.
"""

from hnnlinear import decide, m_chain, compute_H, quotient_by_H
from hnnlinear.suite import anosov_sub, fixed_line, mixed_nrf, torsion_bs

examples = {
    "hyperbolic map on 2Z^2": anosov_sub(),
    "fixed line plus doubling": mixed_nrf(),
    "identity on a line": fixed_line(),
    "torsion in the base": torsion_bs(),
}
for label, inst in examples.items():
    chain = m_chain(inst)
    h = compute_H(inst, chain)
    v = decide(inst)
    print(f"{label}:")
    print(f"  A = {inst.A.basis}, B = {inst.B.basis}, relations = {inst.relations.basis}")
    print(f"  D = {chain.D.basis}, H = {h.H.basis}")
    print(f"  char poly {h.char_poly} factors {h.factors}")
    print(f"  [D : H] = {v.index_D_over_H}, verdict {v.verdict.value}")
    if v.index_D_over_H != float("inf") and not inst.a_is_all:
        q = quotient_by_H(inst, v.H)
        print(f"  after dividing by H: verdict {decide(q).verdict.value}, "
              f"torsion invariants {q.base.torsion_invariants()}")
    print()
