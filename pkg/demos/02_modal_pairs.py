"""The modal pair (nabla, arrow), its two validators, and the classifier."""

import numpy as np

from nablalg import (
    AdjunctionFailure,
    build_algebra,
    check_equational_axioms,
    classify,
    derive_arrow,
    gen_xn,
)
from nablalg.lattice import build_lattice

chain3 = build_lattice(np.triu(np.ones((3, 3), dtype=bool)))

# the defining law: nabla(c) & a <= b  iff  c <= arrow(a, b).
# given nabla, the arrow (if any) is forced; here is the shift example
x1 = gen_xn(1)
print("x1 nabla:", x1.nabla, " arrow:\n", x1.arrow, "\nbox:", x1.box)

# an arrow can also be recovered by maximum search
print("derived arrow equals stored arrow:",
      (derive_arrow(x1.lat, x1.nabla) == x1.arrow).all())

# a bad pair is rejected with the exact tuple that breaks residuation
try:
    build_algebra(chain3, np.arange(3), np.full((3, 3), 2))
except AdjunctionFailure as err:
    print("rejected:", err)

# the equational laws accept exactly the same pairs as the adjunction scan
report = check_equational_axioms(chain3, np.arange(3), np.full((3, 3), 2))
print("equational verdict on the same pair:", report.to_json())

# seven property flags, with a counterexample for each false one
profile = classify(x1)
print("x1 flags:", sorted(profile.flags()), " witnesses:", profile.witnesses)
