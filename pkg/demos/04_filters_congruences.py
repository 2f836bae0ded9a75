"""Modal filters, the congruence bijection, and a family of simple algebras."""

import numpy as np

from nablalg import (
    all_congruences_oracle,
    all_modal_filters,
    congruence_from_filter,
    filter_from_congruence,
    gen_heyting,
    gen_xn,
    is_simple,
    is_subdirectly_irreducible,
    modal_filter_closure,
)
from nablalg.lattice import build_lattice

h3 = gen_heyting(build_lattice(np.triu(np.ones((3, 3), dtype=bool))))

# least modal filter containing a seed, by fixpoint closure
print("closure of {m} in h3:", sorted(modal_filter_closure(h3, {1}).members))

# filters and congruences match one to one on normal distributive algebras
filters = all_modal_filters(h3)
congs = all_congruences_oracle(h3)
print("h3 filters:", [sorted(f.members) for f in filters])
print("h3 congruences:", [c.blocks for c in congs])
for f in filters:
    theta = congruence_from_filter(h3, f)
    back = filter_from_congruence(h3, theta)
    print(f"  {sorted(f.members)} -> {theta.blocks} -> {sorted(back.members)}")

# verdicts: the three-chain with identity dynamics is irreducible, not simple
print("h3 irreducible:", is_subdirectly_irreducible(h3).to_json())
print("h3 simple:", is_simple(h3).to_json())

# the shift family is simple at every size: n-fold nabla reaches bottom
for n in (1, 2, 3):
    alg = gen_xn(n)
    print(f"shift algebra n={n}: {alg.n} elements,",
          "simple =", is_simple(alg).flag,
          "congruences =", len(all_congruences_oracle(alg)))
