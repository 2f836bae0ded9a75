"""Cut completion of an algebra through normal ideals.

A normal ideal is a subset fixed by the lower-bounds-of-upper-bounds
operator; equivalently an intersection of principal ideals.  The ideal
lattice carries a lifted modal pair,

    nabla(N) = join of the principal ideals of nabla over N
    arrow(M, N) = {x : nabla(x) & m in N for every m in M}

and the principal-ideal embedding preserves the whole signature.  On
finite carriers the embedding is a bijection; the generic construction is
still executed in full (upper/lower bound operators, joins as closures of
unions) so the lifted formulas themselves get exercised, rather than
shortcutting to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraMorphism,
    NablaAlgebra,
    build_algebra,
    check_morphism,
    classify,
)
from .errors import ensure
from .lattice import build_lattice


@dataclass(frozen=True)
class NormalIdeal:
    algebra: NablaAlgebra = field(compare=False, repr=False)
    members: frozenset = frozenset()

    def to_json(self) -> list:
        return sorted(int(x) for x in self.members)


def upper_bounds(lat, members) -> frozenset:
    mask = np.ones(lat.n, dtype=bool)
    for x in members:
        mask &= lat.leq[x]
    return frozenset(int(v) for v in np.flatnonzero(mask))


def lower_bounds(lat, members) -> frozenset:
    mask = np.ones(lat.n, dtype=bool)
    for x in members:
        mask &= lat.leq[:, x]
    return frozenset(int(v) for v in np.flatnonzero(mask))


def lu_closure(lat, members) -> frozenset:
    return lower_bounds(lat, upper_bounds(lat, members))


def is_normal_ideal(lat, members) -> bool:
    return lu_closure(lat, members) == frozenset(members)


def normal_ideals(alg: NablaAlgebra) -> list:
    """All intersections of principal ideals, canonically ordered.

    Each result is double-checked: it must be a fixpoint of the
    lower-of-upper closure, and on a finite lattice it must itself be
    principal (intersections of principal ideals are principal via meets).
    """
    lat = alg.lat
    principals = {lat.downset_of(a) for a in range(lat.n)}
    closed = set(principals)
    while True:
        new = {a & b for a in closed for b in closed} - closed
        if not new:
            break
        closed |= new
    out = sorted(closed, key=lambda s: (len(s), tuple(sorted(s))))
    for members in out:
        ensure(is_normal_ideal(lat, members), "ideal family member fails the closure fixpoint")
        ensure(members in principals, "normal ideals of a finite lattice must be principal")
    return [NormalIdeal(alg, members) for members in out]


@dataclass(frozen=True)
class CompletedAlgebra:
    algebra: NablaAlgebra
    ideals: tuple
    embedding: tuple
    morphism: AlgebraMorphism = field(compare=False, repr=False)


def dm_complete(alg: NablaAlgebra) -> CompletedAlgebra:
    """Build the ideal-lattice algebra with the lifted pair and the embedding.

    Every lifted table entry is located through the generic formulas; the
    assembled algebra is re-validated; the embedding is checked to preserve
    the signature (plus the Heyting table when present), to be injective,
    to transport every property flag, and, the carrier being finite, to be
    onto.
    """
    lat = alg.lat
    ideals = normal_ideals(alg)
    members = [i.members for i in ideals]
    k = len(members)
    index = {m: i for i, m in enumerate(members)}
    incl = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            incl[i, j] = a <= b
    ideal_lat = build_lattice(incl)
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            ensure(int(ideal_lat.meet[i, j]) == index[a & b],
                   "ideal meet must be intersection")
            ensure(int(ideal_lat.join[i, j]) == index[lu_closure(lat, a | b)],
                   "ideal join must be the closure of the union")

    nab_tab = np.zeros(k, dtype=np.int64)
    for i, a in enumerate(members):
        union = set()
        for x in a:
            union |= lat.downset_of(int(alg.nabla[x]))
        nab_tab[i] = index[lu_closure(lat, union)]

    arrow_tab = np.zeros((k, k), dtype=np.int64)
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            img = frozenset(
                x for x in range(lat.n)
                if all(int(lat.meet[alg.nabla[x], m]) in b for m in a)
            )
            ensure(img in index, "lifted arrow must land on a normal ideal")
            arrow_tab[i, j] = index[img]

    completed = build_algebra(ideal_lat, nab_tab, arrow_tab)
    for j, b in enumerate(members):
        box_set = frozenset(x for x in range(lat.n) if int(alg.nabla[x]) in b)
        ensure(int(completed.box[j]) == index[box_set],
               "lifted box must be the nabla preimage")

    emb = tuple(index[lat.downset_of(x)] for x in range(lat.n))
    profile = classify(alg)
    morphism = AlgebraMorphism(source=alg, target=completed, map=emb,
                               preserves_heyting=profile.H)
    rep = check_morphism(morphism)
    ensure(rep.ok and rep.injective, "canonical embedding must be an embedding")
    emb_arr = np.array(emb)
    ensure((~alg.lat.leq == ~ideal_lat.leq[emb_arr[:, None], emb_arr[None, :]]).all(),
           "canonical embedding must reflect order")
    lifted = classify(completed)
    for flag in ("H", "N", "R", "L", "Fa", "Fu"):
        if getattr(profile, flag):
            ensure(getattr(lifted, flag), f"completion must keep flag {flag}")
    ensure(k == alg.n, "finite completion must be a bijection")
    return CompletedAlgebra(algebra=completed, ideals=tuple(ideals),
                            embedding=emb, morphism=morphism)
