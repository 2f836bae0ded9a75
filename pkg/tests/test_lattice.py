import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nablalg.errors import NoBounds, NoJoin, NoMeet, NotPartialOrder
from nablalg.lattice import (
    all_lattices,
    all_posets,
    all_upsets,
    build_lattice,
    distributivity_witness,
    heyting_table,
    is_distributive,
    is_prime_filter,
    join_irreducibles,
    lattice_iso,
    prime_filters,
    upset_lattice,
)

from conftest import boolean_square, chain, chain_matrix, diamond, order_from_covers, pentagon, subsets


# --- independent oracles -----------------------------------------------------


def oracle_distributive(lat):
    for a in range(lat.n):
        for b in range(lat.n):
            for c in range(lat.n):
                lhs = lat.meet[a, lat.join[b, c]]
                rhs = lat.join[lat.meet[a, b], lat.meet[a, c]]
                if lhs != rhs:
                    return (a, b, c)
    return None


def oracle_heyting(lat):
    table = np.zeros((lat.n, lat.n), dtype=int)
    for a in range(lat.n):
        for b in range(lat.n):
            cands = [c for c in range(lat.n) if lat.leq[lat.meet[c, a], b]]
            maxes = [m for m in cands if all(lat.leq[c, m] for c in cands)]
            if not maxes:
                return None
            table[a, b] = maxes[0]
    return table


def oracle_prime_filters(lat):
    found = []
    for s in subsets(range(lat.n)):
        if s and is_prime_filter_oracle(lat, s):
            found.append(s)
    found.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return found


def is_prime_filter_oracle(lat, s):
    if lat.top not in s or lat.bot in s:
        return False
    for x in s:
        for y in range(lat.n):
            if lat.leq[x, y] and y not in s:
                return False
        for y in s:
            if lat.meet[x, y] not in s:
                return False
    for x in range(lat.n):
        for y in range(lat.n):
            if lat.join[x, y] in s and x not in s and y not in s:
                return False
    return True


def oracle_upsets(leq):
    n = leq.shape[0]
    out = []
    for s in subsets(range(n)):
        if all(leq[x, y] <= (y in s) for x in s for y in range(n)):
            out.append(s)
    out.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return out


# --- construction ------------------------------------------------------------


def test_one_element_lattice():
    lat = build_lattice([[True]])
    assert lat.n == 1 and lat.bot == 0 and lat.top == 0


def test_three_chain_tables():
    lat = chain(3)
    for a in range(3):
        for b in range(3):
            assert lat.meet[a, b] == min(a, b)
            assert lat.join[a, b] == max(a, b)
    assert lat.bot == 0 and lat.top == 2


def test_rejects_non_reflexive():
    m = np.eye(3, dtype=bool)
    m[1, 1] = False
    with pytest.raises(NotPartialOrder) as e:
        build_lattice(m)
    assert e.value.witness == (1,)


def test_rejects_antisymmetry_violation():
    m = np.eye(2, dtype=bool)
    m[0, 1] = m[1, 0] = True
    with pytest.raises(NotPartialOrder):
        build_lattice(m)


def test_rejects_non_transitive():
    m = np.eye(3, dtype=bool)
    m[0, 1] = m[1, 2] = True
    with pytest.raises(NotPartialOrder) as e:
        build_lattice(m)
    assert e.value.witness == (0, 1, 2)


def test_rejects_meetless_poset():
    # two incomparable points: no common lower bound
    with pytest.raises(NoMeet) as e:
        build_lattice(np.eye(2, dtype=bool))
    assert e.value.witness == (0, 1)


def test_rejects_joinless_poset():
    # bowtie: 0 below both 2, 3; pair (2, 3) has no upper bound
    leq = order_from_covers(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    with pytest.raises((NoMeet, NoJoin)):
        build_lattice(leq)


def test_rejects_empty():
    with pytest.raises(NoBounds):
        build_lattice(np.zeros((0, 0), dtype=bool))


# --- distributivity ----------------------------------------------------------


def test_chains_distributive():
    for n in (1, 2, 3, 4, 5):
        assert is_distributive(chain(n))


def test_pentagon_is_lattice_but_not_distributive():
    lat = pentagon()
    w = oracle_distributive(lat)
    assert w is not None
    assert not is_distributive(lat)
    a, b, c = distributivity_witness(lat)
    assert lat.meet[a, lat.join[b, c]] != lat.join[lat.meet[a, b], lat.meet[a, c]]


def test_diamond_not_distributive():
    lat = diamond()
    assert oracle_distributive(lat) is not None
    assert not is_distributive(lat)


def test_distributivity_matches_oracle_on_catalog(small_lattices):
    for lat in small_lattices:
        assert is_distributive(lat) == (oracle_distributive(lat) is None)


# --- relative pseudocomplements ----------------------------------------------


def test_heyting_three_chain_frozen():
    lat = chain(3)
    table = heyting_table(lat)
    expected = oracle_heyting(lat)
    assert (table == expected).all()
    # frozen values: m -> 0 is 0, top -> m is m, a <= b gives top
    assert table.tolist() == [[2, 2, 2], [0, 2, 2], [0, 1, 2]]


def test_heyting_two_chain_is_classical():
    table = heyting_table(chain(2))
    assert table.tolist() == [[1, 1], [0, 1]]


def test_heyting_absent_on_pentagon():
    lat = pentagon()
    assert oracle_heyting(lat) is None
    assert heyting_table(lat) is None


def test_heyting_presence_matches_distributivity_exhaustively(six_lattices):
    for lat in six_lattices:
        assert (heyting_table(lat) is not None) == is_distributive(lat)
        got = heyting_table(lat)
        want = oracle_heyting(lat)
        if want is None:
            assert got is None
        else:
            assert (got == want).all()


# --- prime filters -----------------------------------------------------------


def test_prime_filters_three_chain():
    assert prime_filters(chain(3)) == [frozenset({2}), frozenset({1, 2})]


def test_prime_filters_two_chain():
    assert prime_filters(chain(2)) == [frozenset({1})]


def test_prime_filters_boolean_square():
    lat = boolean_square()
    pf = prime_filters(lat)
    assert len(pf) == 2
    assert pf == oracle_prime_filters(lat)
    assert len(join_irreducibles(lat)) == 2


def test_prime_filters_match_subset_oracle(six_lattices):
    for lat in six_lattices:
        got = prime_filters(lat)
        assert got == oracle_prime_filters(lat)
        for f in got:
            assert is_prime_filter(lat, f)


def test_one_element_lattice_has_no_prime_filter():
    assert prime_filters(chain(1)) == []


# --- upset lattices ----------------------------------------------------------


def test_upsets_one_point():
    fam = upset_lattice(np.eye(1, dtype=bool))
    assert fam.lattice.n == 2
    assert fam.upsets == (frozenset(), frozenset({0}))


def test_upsets_two_chain_gives_three_chain():
    fam = upset_lattice(chain_matrix(2))
    assert fam.lattice.n == 3
    assert lattice_iso(fam.lattice, chain(3)) is not None


def test_upsets_two_antichain_gives_boolean_square():
    fam = upset_lattice(np.eye(2, dtype=bool))
    assert fam.lattice.n == 4
    assert lattice_iso(fam.lattice, boolean_square()) is not None


def test_all_upsets_matches_subset_oracle():
    for leq in (np.eye(3, dtype=bool), chain_matrix(3),
                order_from_covers(4, [(0, 1), (0, 2)]),
                order_from_covers(4, [(0, 2), (1, 2), (2, 3)])):
        assert all_upsets(leq) == oracle_upsets(leq)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 12 - 1), st.integers(2, 4))
def test_upset_lattice_of_random_poset_is_heyting(bits, n):
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    covers = [p for k, p in enumerate(pairs) if (bits >> k) & 1]
    leq = order_from_covers(n, covers)
    if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
        return  # cyclic, not a poset
    fam = upset_lattice(leq)
    assert is_distributive(fam.lattice)
    assert heyting_table(fam.lattice) is not None


# --- enumeration and isomorphism ---------------------------------------------


def test_labeled_poset_counts():
    # known values: 1, 3, 19, 219 labeled posets on 1..4 elements
    for n, want in [(1, 1), (2, 3), (3, 19), (4, 219)]:
        assert sum(1 for _ in all_posets(n)) == want


def test_unlabeled_lattice_counts(six_lattices):
    # known values: 1, 1, 1, 2, 5, 15 lattice isomorphism classes on 1..6 elements
    by_size = {}
    for lat in six_lattices:
        by_size[lat.n] = by_size.get(lat.n, 0) + 1
    assert by_size == {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15}


def test_all_lattices_agrees_with_poset_filtering():
    # the bounded-middle shortcut must reach the same classes as filtering
    # every labeled poset
    from nablalg.errors import NoBounds, NoJoin, NoMeet
    from nablalg.lattice import canonical_order_matrix

    for n in (1, 2, 3, 4):
        from_posets = set()
        for leq in all_posets(n):
            try:
                lat = build_lattice(leq)
            except (NoMeet, NoJoin, NoBounds):
                continue
            from_posets.add(canonical_order_matrix(lat.leq))
        from_middles = {canonical_order_matrix(lat.leq)
                        for lat in all_lattices(n) if lat.n == n}
        assert from_posets == from_middles


def test_lattice_iso_finds_relabelings():
    lat = chain(3)
    perm = np.array([2, 0, 1])
    shuffled = build_lattice(lat.leq[np.ix_(perm, perm)])
    iso = lattice_iso(shuffled, lat)
    assert iso is not None
    for a in range(3):
        for b in range(3):
            assert shuffled.leq[a, b] == lat.leq[iso[a], iso[b]]


def test_lattice_iso_distinguishes_pentagon_diamond():
    assert lattice_iso(pentagon(), diamond()) is None


def test_absorption_on_catalog(small_lattices):
    for lat in small_lattices:
        idx = np.arange(lat.n)
        assert (lat.meet[idx[:, None], lat.join] == idx[:, None]).all()
        assert (lat.join[idx[:, None], lat.meet] == idx[:, None]).all()
