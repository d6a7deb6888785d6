"""Extending phi to a finite-order automorphism when D = 0.

Orbits of elements of A & B leave A & B in both directions. The orbit
segments, closed up cyclically, give an automorphism of finite order on a
finite-index subgroup K_bar.
"""

from hnnlinear import extend_to_finite_order, orbit_run, root_overgroup
from hnnlinear.suite import swap, z3_shift, z4_replacement

inst = z4_replacement()
print("Z^4 example: e1 -> e2, 2e2 -> e3, e4 -> e1")
run = orbit_run(inst, (1, 0, 0, 0))
print("  replacements:", run.replacements)
print(f"  c = {run.c}, lambda = {run.lam}, mu = {run.mu}")
print("  orbit segment:", run.S_bar)
ext = extend_to_finite_order(inst)
print("  K_bar =", ext.K_bar.basis, " index", ext.index_in_K)
print("  phi_bar =", ext.phi_bar, " order", ext.order)
X = root_overgroup(ext, inst)
print(f"  overgroup X = (1/{X.denominator}) K_bar contains K with index {X.index_of_K}")
print("  theta_X on e1:", X.theta((1, 0, 0, 0)))

for label, inst in (("swap", swap()), ("Z^3 shift", z3_shift())):
    ext = extend_to_finite_order(inst)
    print(f"\n{label}: phi_bar = {ext.phi_bar}, order {ext.order}, index {ext.index_in_K}")
