"""Frames, the two functors, the finite representation, and amalgamation."""

import numpy as np

from nablalg import (
    AlgebraMorphism,
    amalgamate_algebras,
    canonical_frame_embedding,
    classify,
    frame_profile,
    gen_heyting,
    gen_xn,
    prime_frame,
    upset_algebra,
)
from nablalg.lattice import build_lattice

x1 = gen_xn(1)

# prime filters of a distributive algebra form a frame; the relation is the
# image-containment test, cross-checked against the detachment form
frame = prime_frame(x1)
print("worlds:", frame.n, " order:\n", frame.leq.astype(int),
      "\nrelation:\n", frame.r.astype(int))
print("frame flags:", sorted(frame_profile(frame).flags()),
      " witness pi:", frame.pi)

# upsets of that frame rebuild the algebra; membership is the isomorphism
back = upset_algebra(frame)
emb = canonical_frame_embedding(x1)
print("round trip size:", back.n, " membership map:", emb.map)

# amalgamation: two embeddings of the two-element algebra into the
# three-chain complete to a commuting square inside the six-element amalgam
b2 = gen_heyting(build_lattice(np.triu(np.ones((2, 2), dtype=bool))))
h3 = gen_heyting(build_lattice(np.triu(np.ones((3, 3), dtype=bool))))
f = AlgebraMorphism(b2, h3, (0, 2), preserves_heyting=True)
res = amalgamate_algebras(b2, h3, h3, f, f, heyting=True)
print("amalgam size:", res.b.n, " flags:", sorted(classify(res.b).flags()))
print("g1:", res.g1.map, " g2:", res.g2.map)
print("square commutes:",
      tuple(res.g1.map[v] for v in f.map) == tuple(res.g2.map[v] for v in f.map))
