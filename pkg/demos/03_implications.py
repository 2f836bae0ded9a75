"""Bare implications versus residuated ones: the three-chain counterexample."""

from nablalg import (
    StrongAlgebraCandidate,
    check_implication_axioms,
    gen_counterexample_cex3,
    gen_xn,
    nabla_from_strong,
)

# every arrow of a valid pair is an implication that internalizes meets
x1 = gen_xn(1)
rep = check_implication_axioms(StrongAlgebraCandidate(x1.lat, x1.arrow))
print("x1 arrow: ok =", rep.ok,
      " meets internalized =", rep.meet_internalizing,
      " joins internalized =", rep.join_internalizing)

# and the nabla can be recovered from the arrow alone by adjoint search
print("recovered nabla:", nabla_from_strong(
    StrongAlgebraCandidate(x1.lat, x1.arrow)).nabla)

# the converse fails: this arrow passes every implication check...
cex = gen_counterexample_cex3()
rep = check_implication_axioms(cex)
print("cex3: ok =", rep.ok,
      " meets =", rep.meet_internalizing, " joins =", rep.join_internalizing)

# ... yet no nabla residuates it; the witness pair pins the failure
res = nabla_from_strong(cex)
print("cex3 adjoint search:", res.to_json())
