"""Modal filters, congruences, and the bijection between them.

On a normal distributive algebra the modal filters (upsets closed under
meet, nabla and box) correspond one-to-one with the congruences via

    alpha(F) = {(x, y) : arrow(x, y) & arrow(y, x) in F}
    beta(theta) = {x : (x, top) in theta}

and the simplicity / subdirect-irreducibility verdicts reduce to
membership tests in generated modal filters.  A congruence oracle that
never mentions filters (principal congruences closed under partition
joins) keeps the two routes independently checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import NablaAlgebra, AlgebraMorphism, check_morphism, classify
from .errors import (
    NotDistributive,
    NotEmbedding,
    NotNormal,
    TooLarge,
    Trivial,
    ensure,
)

ORACLE_BOUND = 10


@dataclass(frozen=True)
class ModalFilter:
    algebra: NablaAlgebra = field(compare=False, repr=False)
    members: frozenset = frozenset()

    def to_json(self) -> list:
        return sorted(int(x) for x in self.members)


@dataclass(frozen=True)
class Congruence:
    """Partition as a block-id vector, labels by first occurrence."""

    algebra: NablaAlgebra = field(compare=False, repr=False)
    blocks: tuple = ()

    def same(self, x: int, y: int) -> bool:
        return self.blocks[x] == self.blocks[y]

    def n_blocks(self) -> int:
        return len(set(self.blocks))

    def refines(self, other: "Congruence") -> bool:
        """Inclusion of relations: every pair of self is a pair of other."""
        seen = {}
        for x, b in enumerate(self.blocks):
            if b in seen:
                if other.blocks[x] != other.blocks[seen[b]]:
                    return False
            else:
                seen[b] = x
        return True

    def to_json(self) -> list:
        return [int(b) for b in self.blocks]


def canonical_blocks(raw) -> tuple:
    relabel = {}
    out = []
    for b in raw:
        out.append(relabel.setdefault(b, len(relabel)))
    return tuple(out)


def _require_normal(alg: NablaAlgebra) -> None:
    if not classify(alg).N:
        raise NotNormal("operation needs a normal algebra (nabla preserving finite meets)")


def _require_distributive(alg: NablaAlgebra) -> None:
    if not classify(alg).D:
        raise NotDistributive("operation needs a distributive algebra")


def is_modal_filter(alg: NablaAlgebra, members) -> bool:
    s = frozenset(members)
    lat = alg.lat
    if lat.top not in s:
        return False
    for x in s:
        if not lat.upset_of(x) <= s:
            return False
        if int(alg.nabla[x]) not in s or int(alg.box[x]) not in s:
            return False
        for y in s:
            if int(lat.meet[x, y]) not in s:
                return False
    return True


def modal_filter_closure(alg: NablaAlgebra, seed) -> ModalFilter:
    """Least modal filter containing ``seed``, by fixpoint iteration."""
    _require_normal(alg)
    lat = alg.lat
    mask = np.zeros(alg.n, dtype=bool)
    for x in seed:
        mask[int(x)] = True
    mask[lat.top] = True
    while True:
        new = mask | lat.leq[mask].any(axis=0)
        idx = np.flatnonzero(new)
        new[lat.meet[np.ix_(idx, idx)].ravel()] = True
        idx = np.flatnonzero(new)
        new[alg.nabla[idx]] = True
        new[alg.box[idx]] = True
        if (new == mask).all():
            break
        mask = new
    f = ModalFilter(alg, frozenset(int(x) for x in np.flatnonzero(mask)))
    ensure(is_modal_filter(alg, f.members), "closure must produce a modal filter")
    return f


def all_modal_filters(alg: NablaAlgebra) -> list:
    """Every modal filter, ordered by (size, members).

    A filter of a finite lattice contains the meet of its members, hence is
    principal; so scanning principal filters and keeping those closed under
    nabla and box is exhaustive.  Each candidate is re-checked against the
    full predicate rather than a shortcut criterion.
    """
    _require_normal(alg)
    out = []
    for a in range(alg.n):
        members = alg.lat.upset_of(a)
        if is_modal_filter(alg, members):
            out.append(ModalFilter(alg, members))
    out.sort(key=lambda f: (len(f.members), tuple(sorted(f.members))))
    return out


def is_congruence(alg: NablaAlgebra, blocks) -> bool:
    b = np.asarray(blocks, dtype=np.int64)
    lat = alg.lat
    reps = {}
    for x in range(alg.n):
        reps.setdefault(int(b[x]), []).append(x)
    for group in reps.values():
        x = group[0]
        for y in group[1:]:
            if b[alg.nabla[x]] != b[alg.nabla[y]]:
                return False
            for table in (lat.meet, lat.join, alg.arrow):
                if (b[table[x]] != b[table[y]]).any():
                    return False
                if (b[table[:, x]] != b[table[:, y]]).any():
                    return False
    return True


def congruence_from_filter(alg: NablaAlgebra, f: ModalFilter) -> Congruence:
    """alpha: relate x and y when both arrows between them lie in the filter."""
    _require_normal(alg)
    _require_distributive(alg)
    memb = np.zeros(alg.n, dtype=bool)
    memb[sorted(f.members)] = True
    biimp = alg.lat.meet[alg.arrow, alg.arrow.T]
    rel = memb[biimp]
    blocks = _blocks_from_relation(rel)
    theta = Congruence(alg, blocks)
    ensure(is_congruence(alg, blocks), "alpha must produce a congruence")
    return theta


def _blocks_from_relation(rel: np.ndarray) -> tuple:
    n = rel.shape[0]
    ensure(bool(rel.diagonal().all()) and (rel == rel.T).all(),
           "filter biimplication relation must be reflexive and symmetric")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in np.argwhere(rel):
        rx, ry = find(int(x)), find(int(y))
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    return canonical_blocks(find(x) for x in range(n))


def filter_from_congruence(alg: NablaAlgebra, theta: Congruence) -> ModalFilter:
    """beta: the block of the top element."""
    _require_normal(alg)
    _require_distributive(alg)
    top_block = theta.blocks[alg.lat.top]
    members = frozenset(x for x in range(alg.n) if theta.blocks[x] == top_block)
    f = ModalFilter(alg, members)
    ensure(is_modal_filter(alg, members), "beta must produce a modal filter")
    return f


def principal_congruence(alg: NablaAlgebra, x: int, y: int) -> Congruence:
    """Least congruence identifying x and y, by operation-respecting closure."""
    n = alg.n
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            return True
        return False

    union(x, y)
    tables = (alg.lat.meet, alg.lat.join, alg.arrow)
    changed = True
    while changed:
        changed = False
        groups = {}
        for v in range(n):
            groups.setdefault(find(v), []).append(v)
        for group in groups.values():
            u = group[0]
            for v in group[1:]:
                if union(int(alg.nabla[u]), int(alg.nabla[v])):
                    changed = True
                for t in tables:
                    for z in range(n):
                        if union(int(t[u, z]), int(t[v, z])):
                            changed = True
                        if union(int(t[z, u]), int(t[z, v])):
                            changed = True
    return Congruence(alg, canonical_blocks(find(v) for v in range(n)))


def join_congruences(alg: NablaAlgebra, a: Congruence, b: Congruence) -> Congruence:
    n = alg.n
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for blocks in (a.blocks, b.blocks):
        firsts = {}
        for v in range(n):
            key = blocks[v]
            if key in firsts:
                ra, rb = find(firsts[key]), find(v)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                firsts[key] = v
    out = Congruence(alg, canonical_blocks(find(v) for v in range(n)))
    ensure(is_congruence(alg, out.blocks), "join of congruences must stay a congruence")
    return out


def all_congruences_oracle(alg: NablaAlgebra) -> list:
    """Every congruence, with no reference to modal filters.

    Principal congruences of all pairs, closed under pairwise joins; every
    congruence is the join of the principal congruences it contains, so the
    closure is exhaustive.  Ordered finest-first.
    """
    if alg.n > ORACLE_BOUND:
        raise TooLarge(f"congruence oracle bounded at {ORACLE_BOUND} elements")
    identity = Congruence(alg, tuple(range(alg.n)))
    found = {identity.blocks: identity}
    for x in range(alg.n):
        for y in range(x + 1, alg.n):
            theta = principal_congruence(alg, x, y)
            found.setdefault(theta.blocks, theta)
    while True:
        items = list(found.values())
        new = []
        for i, a in enumerate(items):
            for b in items[i + 1:]:
                j = join_congruences(alg, a, b)
                if j.blocks not in found:
                    found[j.blocks] = j
                    new.append(j)
        if not new:
            break
    out = list(found.values())
    for theta in out:
        ensure(is_congruence(alg, theta.blocks), "oracle produced a non-congruence")
    out.sort(key=lambda t: (-t.n_blocks(), t.blocks))
    return out


@dataclass(frozen=True)
class Verdict:
    flag: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"ok": self.flag,
                "witness": None if self.witness is None else int(self.witness)}


def _orbit(table: np.ndarray, x: int) -> list:
    seen = []
    v = x
    while v not in seen:
        seen.append(v)
        v = int(table[v])
    return seen


def is_subdirectly_irreducible(alg: NablaAlgebra) -> Verdict:
    """True when some x != top lies in every modal filter generated by a y != top.

    On left (resp. right) algebras the verdict is cross-checked against the
    nabla-power (resp. box-power) criterion.
    """
    _require_normal(alg)
    _require_distributive(alg)
    if alg.n == 1:
        raise Trivial("verdict undefined on the one-element algebra")
    top = alg.lat.top
    others = [y for y in range(alg.n) if y != top]
    common = None
    for y in others:
        members = modal_filter_closure(alg, {y}).members
        common = members if common is None else (common & members)
    candidates = sorted(common - {top})
    flag = bool(candidates)
    # canonical witness: a maximal candidate (the second-largest element in
    # the Heyting special case)
    witness = None
    if flag:
        witness = next(x for x in candidates
                       if not any(alg.lat.leq[x, y] and x != y for y in candidates))

    profile = classify(alg)
    for flagged, table in ((profile.L, alg.nabla), (profile.R, alg.box)):
        if not flagged:
            continue
        power = any(
            all(any(alg.lat.leq[v, x] for v in _orbit(table, y)) for y in others)
            for x in others
        )
        ensure(power == flag, "power criterion disagrees with closure-membership verdict")
    return Verdict(flag, witness)


def is_simple(alg: NablaAlgebra) -> Verdict:
    """True when every singleton-generated modal filter reaches bottom.

    Cross-checked against the congruence count (exactly two on non-trivial
    simple algebras) whenever the oracle bound allows, and against the
    power criteria on left / right algebras.
    """
    _require_normal(alg)
    _require_distributive(alg)
    top, bot = alg.lat.top, alg.lat.bot
    others = [x for x in range(alg.n) if x != top]
    failing = [x for x in others
               if bot not in modal_filter_closure(alg, {x}).members]
    flag = not failing
    witness = None if flag else failing[0]

    if 2 <= alg.n <= ORACLE_BOUND:
        count = len(all_congruences_oracle(alg))
        ensure((count == 2) == flag, "congruence count disagrees with simplicity verdict")
    profile = classify(alg)
    for flagged, table in ((profile.L, alg.nabla), (profile.R, alg.box)):
        if not flagged:
            continue
        power = all(bot in (int(v) for v in _orbit(table, x)) for x in others)
        ensure(power == flag, "power criterion disagrees with simplicity verdict")
    return Verdict(flag, witness)


INTERNAL_LAWS = {
    "meet-translation": "arrow(x, y) <= arrow(x & z, y & z)",
    "join-translation": "arrow(x, y) <= arrow(x | z, y | z)",
    "nabla-distribution": "nabla(arrow(x, y)) <= arrow(nabla(x), nabla(y))",
    "second-arg-composition": "box(arrow(x, y)) <= arrow(arrow(z, x), arrow(z, y))",
    "first-arg-composition": "box(arrow(x, y)) <= arrow(arrow(y, z), arrow(x, z))",
    "heyting-second-arg": "arrow(x, y) <= arrow(heyting(z, x), heyting(z, y))",
    "heyting-first-arg": "arrow(x, y) <= arrow(heyting(y, z), heyting(x, z))",
}


def check_internal_cong_inequalities(alg: NablaAlgebra):
    """The compatibility inequalities behind the filter/congruence bijection."""
    from .algebra import LawReport, Violation, _first_false

    _require_normal(alg)
    _require_distributive(alg)
    lat, arr, nab, box = alg.lat, alg.arrow, alg.nabla, alg.box
    leq, meet, join = lat.leq, lat.meet, lat.join
    violations = []

    def run(law, mask):
        if not mask.all():
            violations.append(Violation(law, _first_false(mask)))

    lhs = arr[:, :, None]
    run("meet-translation", leq[lhs, arr[meet[:, None, :], meet[None, :, :]]])
    run("join-translation", leq[lhs, arr[join[:, None, :], join[None, :, :]]])
    run("nabla-distribution", leq[nab[arr], arr[nab[:, None], nab[None, :]]])
    arr_t = arr.T
    run("second-arg-composition",
        leq[box[arr][:, :, None], arr[arr_t[:, None, :], arr_t[None, :, :]]])
    run("first-arg-composition",
        leq[box[arr][:, :, None], arr[arr[None, :, :], arr[:, None, :]]])
    if classify(alg).H:
        hey = alg.heyting
        hey_t = hey.T
        run("heyting-second-arg", leq[lhs, arr[hey_t[:, None, :], hey_t[None, :, :]]])
        run("heyting-first-arg", leq[lhs, arr[hey[None, :, :], hey[:, None, :]]])
    return LawReport(ok=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class ExtensionCase:
    theta: Congruence
    extension: Congruence
    restricts: bool


@dataclass(frozen=True)
class ExtensionReport:
    ok: bool
    cases: tuple

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "cases": [{"theta": c.theta.to_json(),
                           "extension": c.extension.to_json(),
                           "restricts": c.restricts} for c in self.cases]}


def check_congruence_extension(sub: NablaAlgebra, big: NablaAlgebra,
                               inclusion: AlgebraMorphism) -> ExtensionReport:
    """Extend each congruence of the subalgebra along the inclusion.

    Uses the recipe: push the corresponding modal filter forward, close it
    in the big algebra, and pull the induced congruence back; the
    restriction must be the congruence we started from.
    """
    rep = check_morphism(inclusion)
    if not rep.ok or not rep.injective:
        raise NotEmbedding("inclusion must be a validated embedding")
    if sub.n > ORACLE_BOUND or big.n > ORACLE_BOUND:
        raise TooLarge(f"extension check bounded at {ORACLE_BOUND} elements")
    for alg in (sub, big):
        _require_normal(alg)
        _require_distributive(alg)
    fmap = inclusion.map
    cases = []
    for theta in all_congruences_oracle(sub):
        f_sub = filter_from_congruence(sub, theta)
        pushed = {fmap[x] for x in f_sub.members}
        f_big = modal_filter_closure(big, pushed)
        phi = congruence_from_filter(big, f_big)
        restricts = all(
            theta.same(a, b) == phi.same(fmap[a], fmap[b])
            for a in range(sub.n) for b in range(sub.n)
        )
        cases.append(ExtensionCase(theta, phi, restricts))
    ok = all(c.restricts for c in cases)
    ensure(ok, "congruence extension recipe failed to restrict")
    return ExtensionReport(ok=ok, cases=tuple(cases))
