"""Finite bounded lattices as index tables.

Elements are the indices ``0..n-1``; all structure is stored in tables:
an ``n x n`` boolean order matrix ``leq`` plus derived ``meet``/``join``
element-index tables.  Everything downstream (classification, congruences,
completions, duality) lives on top of these tables, so construction is
strict: ``build_lattice`` rejects anything that is not a bounded lattice
and re-derives every algebraic law it relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoBounds,
    NoJoin,
    NoMeet,
    NotPartialOrder,
    ShapeError,
    ensure,
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _as_bool_matrix(leq) -> np.ndarray:
    arr = np.asarray(leq, dtype=bool)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"order matrix must be square, got shape {arr.shape}")
    return arr


def validate_partial_order(leq) -> np.ndarray:
    """Return the matrix if reflexive, antisymmetric and transitive; raise with a witness otherwise."""
    arr = _as_bool_matrix(leq)
    n = arr.shape[0]
    diag = arr.diagonal()
    if not diag.all():
        i = int(np.flatnonzero(~diag)[0])
        raise NotPartialOrder(f"not reflexive at {i}", witness=(i,))
    sym = arr & arr.T
    np.fill_diagonal(sym, False)
    if sym.any():
        i, j = (int(v) for v in np.argwhere(sym)[0])
        raise NotPartialOrder(f"antisymmetry fails on ({i}, {j})", witness=(i, j))
    closure = (arr.astype(np.int64) @ arr.astype(np.int64)) > 0
    bad = closure & ~arr
    if bad.any():
        i, j = (int(v) for v in np.argwhere(bad)[0])
        k = int(np.flatnonzero(arr[i] & arr[:, j])[0])
        raise NotPartialOrder(
            f"transitivity fails: {i} <= {k} <= {j} but not {i} <= {j}",
            witness=(i, k, j),
        )
    return arr


def _bound_table(leq: np.ndarray, lower: bool) -> np.ndarray:
    """All-pairs greatest lower bounds (``lower=True``) or least upper bounds."""
    n = leq.shape[0]
    rel = leq if lower else leq.T
    # bnd[x, a, b]: x is a common (lower/upper) bound of a and b
    bnd = rel[:, :, None] & rel[:, None, :]
    counts = bnd.sum(axis=0)
    # cov[m, a, b] = number of bounds of (a, b) that lie (below/above) m
    cov = np.tensordot(rel.astype(np.int64), bnd.astype(np.int64), axes=([0], [0]))
    is_extremum = bnd & (cov == counts[None, :, :])
    found = is_extremum.any(axis=0)
    if not found.all():
        a, b = (int(v) for v in np.argwhere(~found)[0])
        if lower:
            raise NoMeet(f"elements {a} and {b} have no meet", witness=(a, b))
        raise NoJoin(f"elements {a} and {b} have no join", witness=(a, b))
    return is_extremum.argmax(axis=0).astype(np.int64)


class FiniteLattice:
    """Validated bounded lattice; immutable after construction."""

    __slots__ = ("n", "leq", "meet", "join", "bot", "top",
                 "_distributive", "_dist_witness", "_heyting", "_heyting_known")

    def __init__(self, leq, meet, join, bot, top):
        self.n = int(leq.shape[0])
        self.leq = _freeze(leq)
        self.meet = _freeze(meet)
        self.join = _freeze(join)
        self.bot = int(bot)
        self.top = int(top)
        self._distributive = None
        self._dist_witness = None
        self._heyting = None
        self._heyting_known = False

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def upset_of(self, a: int) -> frozenset:
        """Principal filter [a)."""
        return frozenset(int(x) for x in np.flatnonzero(self.leq[a]))

    def downset_of(self, a: int) -> frozenset:
        """Principal ideal (a]."""
        return frozenset(int(x) for x in np.flatnonzero(self.leq[:, a]))

    def meet_all(self, xs) -> int:
        out = self.top
        for x in xs:
            out = int(self.meet[out, x])
        return out

    def join_all(self, xs) -> int:
        out = self.bot
        for x in xs:
            out = int(self.join[out, x])
        return out

    def __repr__(self):
        return f"FiniteLattice(n={self.n})"


def build_lattice(leq) -> FiniteLattice:
    """Validate an order matrix and derive meet/join tables and the bounds.

    Rejects non-posets (with a witness tuple), posets where some pair lacks
    a meet or a join, and the empty carrier.  The derived tables are checked
    against the lattice laws before the value is frozen.
    """
    arr = validate_partial_order(leq)
    n = arr.shape[0]
    if n == 0:
        raise NoBounds("empty carrier has no bounds")
    meet = _bound_table(arr, lower=True)
    join = _bound_table(arr, lower=False)
    bots = np.flatnonzero(arr.all(axis=1))
    tops = np.flatnonzero(arr.all(axis=0))
    if len(bots) != 1 or len(tops) != 1:
        raise NoBounds("lattice must have a least and a greatest element")
    lat = FiniteLattice(arr.copy(), meet, join, bots[0], tops[0])
    _check_lattice_laws(lat)
    return lat


def _check_lattice_laws(lat: FiniteLattice) -> None:
    m, j, n = lat.meet, lat.join, lat.n
    idx = np.arange(n)
    ensure((m == m.T).all() and (j == j.T).all(), "meet/join not commutative")
    ensure((m[idx, idx] == idx).all() and (j[idx, idx] == idx).all(),
           "meet/join not idempotent")
    ensure((m[m[:, :, None], idx[None, None, :]] == m[idx[:, None, None], m[None, :, :]]).all(),
           "meet not associative")
    ensure((j[j[:, :, None], idx[None, None, :]] == j[idx[:, None, None], j[None, :, :]]).all(),
           "join not associative")
    ensure((m[idx[:, None], j] == idx[:, None]).all(), "absorption a&(a|b)=a fails")
    ensure((j[idx[:, None], m] == idx[:, None]).all(), "absorption a|(a&b)=a fails")
    ensure((m[lat.bot] == lat.bot).all() and (j[lat.top] == lat.top).all(),
           "bounds do not absorb")


def distributivity_witness(lat: FiniteLattice):
    """None when the distributive law holds; otherwise the first bad (a, b, c)."""
    if lat._distributive is None:
        lhs = lat.meet[np.arange(lat.n)[:, None, None], lat.join[None, :, :]]
        rhs = lat.join[lat.meet[:, :, None], lat.meet[:, None, :]]
        bad = lhs != rhs
        if bad.any():
            lat._dist_witness = tuple(int(v) for v in np.argwhere(bad)[0])
            lat._distributive = False
        else:
            lat._distributive = True
    return lat._dist_witness


def is_distributive(lat: FiniteLattice) -> bool:
    return distributivity_witness(lat) is None


def heyting_table(lat: FiniteLattice):
    """Relative pseudocomplement table, or None when some pair has no maximum.

    ``table[a, b]`` is the greatest c with c & a <= b.  On a finite lattice
    the table exists exactly when the lattice is distributive; that
    equivalence is re-checked on every call path.
    """
    if not lat._heyting_known:
        n = lat.n
        # cand[c, a, b]: c & a <= b
        cand = lat.leq[lat.meet][:, :, :]
        counts = cand.sum(axis=0)
        cov = np.tensordot(lat.leq.astype(np.int64), cand.astype(np.int64), axes=([0], [0]))
        is_max = cand & (cov == counts[None, :, :])
        found = is_max.any(axis=0)
        if found.all():
            table = is_max.argmax(axis=0).astype(np.int64)
            # residuation: c <= (a -> b) iff c & a <= b
            ensure((lat.leq[:, table] == cand).all(), "pseudocomplement not residuated")
            lat._heyting = _freeze(table)
        else:
            lat._heyting = None
        lat._heyting_known = True
        ensure((lat._heyting is not None) == is_distributive(lat),
               "pseudocomplements exist iff distributive")
    return lat._heyting


def join_irreducibles(lat: FiniteLattice) -> list[int]:
    """Non-bottom elements that are not a join of two strictly smaller ones."""
    out = []
    for a in range(lat.n):
        if a == lat.bot:
            continue
        below = np.flatnonzero(lat.leq[:, a] & (np.arange(lat.n) != a))
        joins = lat.join[np.ix_(below, below)]
        if not (joins == a).any():
            out.append(a)
    return out


def _join_primes(lat: FiniteLattice) -> list[int]:
    out = []
    for a in range(lat.n):
        if a == lat.bot:
            continue
        under = lat.leq[a, lat.join]          # a <= x | y
        split = lat.leq[a][:, None] | lat.leq[a][None, :]
        if (~under | split).all():
            out.append(a)
    return out


def is_prime_filter(lat: FiniteLattice, members) -> bool:
    """Upward-closed, meet-closed (so contains top), excludes bot, join-prime."""
    s = frozenset(members)
    if lat.top not in s or lat.bot in s:
        return False
    for x in s:
        if not lat.upset_of(x) <= s:
            return False
        for y in s:
            if int(lat.meet[x, y]) not in s:
                return False
    for x in range(lat.n):
        for y in range(lat.n):
            if int(lat.join[x, y]) in s and x not in s and y not in s:
                return False
    return True


def prime_filters(lat: FiniteLattice) -> list[frozenset]:
    """Every prime filter, canonically ordered by (size, members).

    In a finite lattice every filter is principal (it contains the meet of
    its members), so the prime filters are exactly the principal filters of
    join-prime elements.  Each result is re-checked against the primality
    predicate, and on distributive lattices the count is cross-checked
    against the number of join-irreducibles.
    """
    out = [lat.upset_of(a) for a in _join_primes(lat)]
    out.sort(key=lambda s: (len(s), tuple(sorted(s))))
    for f in out:
        ensure(is_prime_filter(lat, f), "enumerated set is not a prime filter")
    if is_distributive(lat):
        ensure(len(out) == len(join_irreducibles(lat)),
               "prime filter count must match join-irreducibles on distributive lattices")
    return out


def all_upsets(leq) -> list[frozenset]:
    """All upward-closed subsets, ordered by (size, members).

    Every upset is a union of principal upsets, so breadth-first closure of
    the empty set under "union one more principal upset" is exhaustive and
    output-sensitive.
    """
    arr = validate_partial_order(leq)
    n = arr.shape[0]
    principal = [int(sum(1 << v for v in np.flatnonzero(arr[w]))) for w in range(n)]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for mask in frontier:
            for w in range(n):
                if not (mask >> w) & 1:
                    t = mask | principal[w]
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    sets = [frozenset(w for w in range(n) if (mask >> w) & 1) for mask in seen]
    sets.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return sets


@dataclass(frozen=True)
class UpSetFamily:
    """The lattice of all upsets of a poset, with the upsets themselves."""

    lattice: FiniteLattice
    upsets: tuple
    base_leq: np.ndarray

    def index_of(self, members) -> int:
        return self.upsets.index(frozenset(members))


def upset_lattice(poset_leq) -> UpSetFamily:
    """Lattice of all upsets ordered by inclusion; meet is intersection, join union."""
    arr = validate_partial_order(poset_leq)
    ups = all_upsets(arr)
    k = len(ups)
    incl = np.zeros((k, k), dtype=bool)
    for i, a in enumerate(ups):
        for j, b in enumerate(ups):
            incl[i, j] = a <= b
    lat = build_lattice(incl)
    index = {u: i for i, u in enumerate(ups)}
    for i, a in enumerate(ups):
        for j, b in enumerate(ups):
            ensure(int(lat.meet[i, j]) == index[a & b], "upset meet is not intersection")
            ensure(int(lat.join[i, j]) == index[a | b], "upset join is not union")
    ensure(is_distributive(lat), "upset lattice must be distributive")
    ensure(heyting_table(lat) is not None, "upset lattice must carry pseudocomplements")
    return UpSetFamily(lattice=lat, upsets=tuple(ups), base_leq=_freeze(arr.copy()))


# ---------------------------------------------------------------------------
# small-instance enumeration and isomorphism, used by the harness and catalog


def all_posets(n: int):
    """All labeled partial orders on n elements, as boolean matrices."""
    if n == 0:
        yield np.zeros((0, 0), dtype=bool)
        return
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not pairs:
        yield np.eye(1, dtype=bool)
        return
    digits = np.array(list(itertools.product((0, 1, 2), repeat=len(pairs))), dtype=np.int8)
    mats = np.zeros((len(digits), n, n), dtype=bool)
    mats[:, np.arange(n), np.arange(n)] = True
    for p, (i, j) in enumerate(pairs):
        mats[:, i, j] = digits[:, p] == 0
        mats[:, j, i] = digits[:, p] == 1
    closure = np.matmul(mats.astype(np.int64), mats.astype(np.int64)) > 0
    ok = ~(closure & ~mats).any(axis=(1, 2))
    for m in mats[ok]:
        yield m


def canonical_order_matrix(leq: np.ndarray) -> bytes:
    """Lexicographically least relabeling; equal bytes iff isomorphic posets."""
    n = leq.shape[0]
    best = None
    for perm in itertools.permutations(range(n)):
        p = np.array(perm)
        cand = leq[np.ix_(p, p)].tobytes()
        if best is None or cand < best:
            best = cand
    return best


def _bounded_candidates(n: int):
    """Orders with a designated bottom and top around an arbitrary middle poset.

    Every lattice has unique bounds, so up to isomorphism this reaches every
    lattice class while enumerating only the n-2 middle elements.
    """
    if n == 1:
        yield np.eye(1, dtype=bool)
        return
    m = n - 2
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for digits in itertools.product((0, 1, 2), repeat=len(pairs)):
        mid = np.eye(m, dtype=bool)
        for p, (i, j) in enumerate(pairs):
            if digits[p] == 0:
                mid[i, j] = True
            elif digits[p] == 1:
                mid[j, i] = True
        closure = (mid.astype(np.int64) @ mid.astype(np.int64)) > 0
        if (closure & ~mid).any():
            continue
        leq = np.eye(n, dtype=bool)
        leq[0, :] = True
        leq[:, n - 1] = True
        leq[1:n - 1, 1:n - 1] = mid
        yield leq


def all_lattices(max_n: int) -> list[FiniteLattice]:
    """One representative per isomorphism class of lattices with 1..max_n elements."""
    reps = []
    for n in range(1, max_n + 1):
        seen = set()
        found = []
        for leq in _bounded_candidates(n):
            try:
                lat = build_lattice(leq)
            except (NoMeet, NoJoin, NoBounds):
                continue
            canon = canonical_order_matrix(lat.leq)
            if canon not in seen:
                seen.add(canon)
                found.append(canon)
        found.sort()
        for canon in found:
            mat = np.frombuffer(canon, dtype=bool).reshape(n, n)
            reps.append(build_lattice(mat))
    return reps


def lattice_iso(a: FiniteLattice, b: FiniteLattice):
    """An order isomorphism a -> b as an index tuple, or None.

    Backtracking over bijections, pruned by (downset size, upset size)
    signatures; fine for the n <= 20 instances this library targets.
    """
    if a.n != b.n:
        return None
    siga = [(int(a.leq[:, i].sum()), int(a.leq[i, :].sum())) for i in range(a.n)]
    sigb = [(int(b.leq[:, i].sum()), int(b.leq[i, :].sum())) for i in range(b.n)]
    if sorted(siga) != sorted(sigb):
        return None
    cands = [[j for j in range(b.n) if sigb[j] == siga[i]] for i in range(a.n)]
    order = sorted(range(a.n), key=lambda i: len(cands[i]))
    assign = [-1] * a.n
    used = [False] * b.n

    def back(pos: int):
        if pos == a.n:
            return True
        i = order[pos]
        for j in cands[i]:
            if used[j]:
                continue
            ok = True
            for k in order[:pos]:
                if a.leq[i, k] != b.leq[j, assign[k]] or a.leq[k, i] != b.leq[assign[k], j]:
                    ok = False
                    break
            if ok:
                assign[i] = j
                used[j] = True
                if back(pos + 1):
                    return True
                used[j] = False
                assign[i] = -1
        return False

    if back(0):
        return tuple(assign)
    return None
