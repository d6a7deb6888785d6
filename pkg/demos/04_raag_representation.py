"""A faithful-looking integer representation of the swap group <t, e1, e2 | [e1,e2], t e1 t^-1 = e2>.

phi_bar swaps e1 and e2 (order 2). The index-2 kernel of the auxiliary
group is a right-angled Artin group on five vertices, which doubles into a
right-angled Coxeter group with a 10-dimensional reflection representation;
inducing back up gives dimension 20.
"""

import random

from hnnlinear import britton_reduce, word
from hnnlinear.hnn import random_word
from hnnlinear.pipeline import run_pipeline
from hnnlinear.raag import format_word
from hnnlinear.suite import swap

inst = swap()
res = run_pipeline(inst)
print("G~ relators:")
for r in res.presentation.relators:
    print("  ", format_word(r))
print("kernel relators after elimination:")
for r in res.schreier.rewritten_relators:
    if r:
        print("  ", format_word(r))
print("commutation graph:", res.certificate.graph.edge_list())
rep = res.representation
print("dimension:", rep.dimension)

rel = word(1, (1, 0), -1, (0, -1))
print("relator maps to identity:", rep.image(rel).is_identity())
print("image of t has trace", rep.image(word(1)).trace())

rng = random.Random(7)
checked = 0
while checked < 200:
    w = random_word(rng, inst, rng.randint(1, 6))
    if britton_reduce(inst, w).t_length:
        assert not rep.image(w).is_identity()
        checked += 1
print(f"{checked} Britton-nontrivial words, none mapped to the identity")
