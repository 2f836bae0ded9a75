import itertools

import numpy as np
import pytest

from nablalg.lattice import build_lattice


def order_from_covers(n, covers):
    """Reflexive-transitive closure of a cover list; no validity assumed."""
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        leq[a, b] = True
    for _ in range(n):
        leq = leq | ((leq.astype(int) @ leq.astype(int)) > 0)
    return leq


def chain_matrix(n):
    return np.tril(np.ones((n, n), dtype=bool)).T


def chain(n):
    return build_lattice(chain_matrix(n))


def boolean_square():
    # 0 < 1, 2 < 3 with 1, 2 incomparable
    return build_lattice(order_from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)]))


def pentagon():
    # 0 < 1 < 2 < 4 and 0 < 3 < 4, with 3 incomparable to 1 and 2
    return build_lattice(order_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]))


def diamond():
    # three incomparable atoms 1, 2, 3 between bounds 0 and 4
    return build_lattice(
        order_from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
    )


def subsets(universe):
    xs = sorted(universe)
    for r in range(len(xs) + 1):
        yield from (frozenset(c) for c in itertools.combinations(xs, r))


@pytest.fixture(scope="session")
def chain3():
    return chain(3)


@pytest.fixture(scope="session")
def small_lattices():
    from nablalg.lattice import all_lattices

    return all_lattices(5)


@pytest.fixture(scope="session")
def six_lattices():
    from nablalg.lattice import all_lattices

    return all_lattices(6)


@pytest.fixture(scope="session")
def small_catalog():
    """Every valid (lattice, nabla) dynamics on <= 4 elements."""
    from nablalg.gallery import enumerate_algebras

    return list(enumerate_algebras(4))


@pytest.fixture(scope="session")
def full_catalog():
    """Every valid (lattice, nabla) dynamics on <= 5 elements."""
    from nablalg.gallery import enumerate_algebras

    return list(enumerate_algebras(5))


@pytest.fixture(scope="session")
def x1():
    from nablalg.gallery import gen_xn

    return gen_xn(1)


@pytest.fixture(scope="session")
def h3():
    from nablalg.gallery import gen_heyting

    return gen_heyting(chain(3))


@pytest.fixture(scope="session")
def b2():
    from nablalg.gallery import gen_heyting

    return gen_heyting(chain(2))


@pytest.fixture(scope="session")
def b4():
    from nablalg.gallery import gen_heyting

    return gen_heyting(boolean_square())
