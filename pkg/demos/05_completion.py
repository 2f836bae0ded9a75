"""Cut completion: normal ideals, the lifted pair, the canonical embedding."""

from nablalg import dm_complete, gen_xn, normal_ideals

x1 = gen_xn(1)

# normal ideals are the lower-of-upper fixpoints; on a finite carrier they
# are exactly the principal ideals
print("normal ideals of x1:", [sorted(i.members) for i in normal_ideals(x1)])

# the completion rebuilds the algebra on the ideal lattice and embeds the
# original through principal ideals; finite input, so the embedding is onto
comp = dm_complete(x1)
print("completed size:", comp.algebra.n)
print("embedding:", comp.embedding)
print("lifted nabla:", comp.algebra.nabla)
print("lifted arrow:\n", comp.algebra.arrow)
print("embedding preserves nabla:",
      all(comp.embedding[int(x1.nabla[a])] == int(comp.algebra.nabla[comp.embedding[a]])
          for a in range(x1.n)))
