"""Baumslag-Solitar groups BS(m, n) = <t, a | t a^m t^-1 = a^n>.

The base is K = Z with A = mZ and B = nZ. The group is Z-linear exactly when
|m| = |n|; otherwise D = Z but the only phi-invariant subgroup is 0.
"""

from hnnlinear import decide, m_chain, compute_H, britton_reduce, word
from hnnlinear.suite import bs

print("verdict grid (rows m, columns n):")
ns = [-4, -3, -2, 2, 3, 4]
print("      " + "".join(f"{n:>6}" for n in ns))
for m in (2, 3, 4):
    cells = []
    for n in ns:
        v = decide(bs(m, n)).verdict.value
        cells.append({"ZLinear": "Z", "NotResiduallyFinite": "NRF"}.get(v, v))
    print(f"{m:>6}" + "".join(f"{c:>6}" for c in cells))

for m, n in ((2, 3), (2, -2)):
    inst = bs(m, n)
    chain = m_chain(inst)
    h = compute_H(inst, chain)
    print(f"\nBS({m},{n}):")
    print("  M-chain:", [M.basis for M in chain.chain[:chain.k + 2]])
    print("  D =", chain.D.basis, " psi =", chain.psi.to_fractions())
    print("  char poly factors (factor, multiplicity, unit?):", h.factors)
    print("  H =", h.H.basis)

inst = bs(2, 4)
for w in (word(1, (2,), -1), word(-1, (4,), 1), word(-1, (2,), 1), word(1, (2,), -1, (-4,))):
    print(f"\nreduce in BS(2,4): {w}  ->  {britton_reduce(inst, w)}")
