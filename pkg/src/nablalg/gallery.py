"""Fixture generators and the exhaustive small-instance catalog."""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import (
    NablaAlgebra,
    StrongAlgebraCandidate,
    build_algebra,
    classify,
    derive_arrow,
)
from .congruence import is_simple
from .errors import NotDistributive, OutOfRange, ensure
from .lattice import FiniteLattice, all_lattices, build_lattice, heyting_table, is_distributive

XN_MAX = 6


def gen_xn(n: int) -> NablaAlgebra:
    """Open-set algebra of the n-point convergent-sequence space with the shift dynamics.

    Points are 1..n plus a limit point; the opens are the whole space and
    every subset of 1..n, so the carrier has 2^n + 1 elements.  The
    dynamics sends x to x+1 (and both n and the limit to the limit); nabla
    is its preimage map and the arrow is recovered by adjoint search.  The
    result is normal, distributive, carries pseudocomplements, and is
    simple: n applications of nabla annihilate every open except the top.
    """
    if not 1 <= n <= XN_MAX:
        raise OutOfRange(f"n must be in 1..{XN_MAX}")
    limit = 0  # the extra non-isolated point
    points = list(range(1, n + 1))
    opens = [frozenset(c) for r in range(n + 1)
             for c in itertools.combinations(points, r)]
    opens.append(frozenset([limit] + points))
    opens.sort(key=lambda s: (len(s), tuple(sorted(s))))
    index = {u: i for i, u in enumerate(opens)}
    k = len(opens)
    leq = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(opens):
        for j, b in enumerate(opens):
            leq[i, j] = a <= b
    lat = build_lattice(leq)

    def shift(x: int) -> int:
        return limit if x in (n, limit) else x + 1

    nabla = np.zeros(k, dtype=np.int64)
    full = frozenset([limit] + points)
    for i, u in enumerate(opens):
        pre = frozenset(x for x in full if shift(x) in u)
        nabla[i] = index[pre]
    arrow = derive_arrow(lat, nabla)
    ensure(arrow is not None, "shift preimage must admit a residuated arrow")
    alg = build_algebra(lat, nabla, arrow)
    profile = classify(alg)
    ensure(profile.has("N", "H", "D"), "shift algebra must be normal distributive Heyting")
    power = np.arange(k)
    for _ in range(n):
        power = alg.nabla[power]
    ensure(all(int(power[u]) == lat.bot for u in range(k) if u != lat.top),
           "n-fold nabla must annihilate every non-top element")
    ensure(is_simple(alg).flag, "shift algebra must be simple")
    return alg


def gen_trivial(lat: FiniteLattice) -> NablaAlgebra:
    """Constant-bottom nabla with constant-top arrow; valid on any lattice."""
    nabla = np.full(lat.n, lat.bot, dtype=np.int64)
    arrow = np.full((lat.n, lat.n), lat.top, dtype=np.int64)
    return build_algebra(lat, nabla, arrow)


def gen_heyting(lat: FiniteLattice) -> NablaAlgebra:
    """Identity nabla with the Heyting table as arrow; needs distributivity."""
    if not is_distributive(lat):
        raise NotDistributive("identity dynamics need a distributive lattice")
    return build_algebra(lat, np.arange(lat.n), heyting_table(lat))


def gen_counterexample_cex3() -> StrongAlgebraCandidate:
    """Three-chain arrow that is a well-behaved implication yet residuates no nabla.

    Rows by first argument: bottom and middle rows are constant top; the
    top row is (bot, bot, top).  All implication axioms hold and the arrow
    internalizes meets and joins, but adjoint search fails at the pair
    (middle, bottom).
    """
    lat = build_lattice(np.triu(np.ones((3, 3), dtype=bool)))
    arrow = np.array([[2, 2, 2], [2, 2, 2], [0, 0, 2]], dtype=np.int64)
    return StrongAlgebraCandidate(lat=lat, arrow=arrow)


ENUM_MAX = 5


def enumerate_algebras(max_n: int, flags=None):
    """Every valid (lattice, nabla) dynamics with at most ``max_n`` elements.

    Lattices range over one representative per isomorphism class; nabla
    ranges over all tables, kept when an arrow residuates it.  Optional
    ``flags`` keeps only algebras whose profile carries all named flags.
    Deterministic order.
    """
    if not 1 <= max_n <= ENUM_MAX:
        raise OutOfRange(f"max_n must be in 1..{ENUM_MAX}")
    wanted = frozenset(flags) if flags else frozenset()
    for lat in all_lattices(max_n):
        for nabla in itertools.product(range(lat.n), repeat=lat.n):
            arrow = derive_arrow(lat, np.array(nabla, dtype=np.int64))
            if arrow is None:
                continue
            alg = build_algebra(lat, np.array(nabla, dtype=np.int64), arrow)
            if wanted and not wanted <= classify(alg).flags():
                continue
            yield alg
