from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from coulomb_weyl.root_datum import (RootDatumError, WeylCapExceeded, build_simple, build_torus,
                                     central_quotient, enumerate_weyl, fundamental_group, mat_mul, product)

F = Fraction

# Weyl group orders and root counts from the classification tables
CASES = [
    ("SU", 2, 2, 2), ("SU", 3, 6, 6), ("SU", 4, 24, 12), ("SU", 5, 120, 20),
    ("Sp", 1, 2, 2), ("Sp", 2, 8, 8), ("Sp", 3, 48, 18),
    ("Spin", 5, 8, 8), ("Spin", 7, 48, 18),           # B_l: 2^l l!
    ("Spin", 6, 24, 12), ("Spin", 8, 192, 24),        # D_l: 2^(l-1) l!
    ("SO", 3, 2, 2), ("SO", 4, 4, 4), ("SO", 6, 24, 12),
]


@pytest.mark.parametrize("family,n,order,nroots", CASES)
def test_weyl_order_and_root_count(family, n, order, nroots):
    d = build_simple(family, n)
    assert len(enumerate_weyl(d)) == order
    assert len(d.roots) == nroots
    assert sum(d.positive) == nroots // 2


def test_weyl_order_formulas():
    for m in range(1, 4):
        assert len(enumerate_weyl(build_simple("Sp", m))) == 2 ** m * factorial(m)
    for l in range(2, 4):
        assert len(enumerate_weyl(build_simple("Spin", 2 * l + 1))) == 2 ** l * factorial(l)
        assert len(enumerate_weyl(build_simple("Spin", 2 * l))) == 2 ** (l - 1) * factorial(l)


@pytest.mark.parametrize("family,n,centre,pi1", [
    ("SU", 2, [2], []), ("SU", 3, [3], []), ("SU", 4, [4], []),
    ("Sp", 2, [2], []), ("Spin", 5, [2], []), ("Spin", 6, [4], []), ("Spin", 8, [2, 2], []),
    ("SO", 3, [], [2]), ("SO", 4, [2], [2]), ("SO", 6, [2], [2]), ("SO", 7, [], [2]),
])
def test_centre_and_fundamental_group(family, n, centre, pi1):
    d = build_simple(family, n)
    assert d.center_invariants() == centre
    assert fundamental_group(d) == pi1


def test_quotients():
    su2 = build_simple("SU", 2)
    so3 = central_quotient(su2, [[F(1, 2)]])
    assert fundamental_group(so3) == [2]
    assert so3.center_invariants() == []
    # SU(2)^3 modulo the diagonal-pair subgroup
    cube = product(product(su2, su2), su2)
    q = central_quotient(cube, [[F(1, 2), F(1, 2), 0], [0, F(1, 2), F(1, 2)]])
    assert fundamental_group(q) == [2, 2]
    assert q.center_invariants() == [2]


def test_non_central_kernel_rejected():
    with pytest.raises(RootDatumError, match="not central"):
        central_quotient(build_simple("SU", 2), [[F(1, 3)]])
    with pytest.raises(RootDatumError):
        build_simple("Spin", 2)


def test_torus():
    t = build_torus(2)
    assert fundamental_group(t) == [0, 0]
    assert len(enumerate_weyl(t)) == 1


def test_weyl_cap():
    with pytest.raises(WeylCapExceeded):
        enumerate_weyl(build_simple("SU", 4), cap=10)


GROUPS = [build_simple(f, n) for f, n in [("SU", 3), ("Sp", 2), ("Spin", 6), ("SO", 5)]]
GROUPS.append(central_quotient(product(build_simple("SU", 2), build_simple("SU", 2)), [[F(1, 2), F(1, 2)]]))


@given(st.sampled_from(GROUPS), st.data())
def test_reflections_are_involutions_preserving_roots(d, data):
    i = data.draw(st.integers(0, len(d.roots) - 1))
    M = d.reflection(i)
    r = d.rank
    assert mat_mul(M, M) == tuple(tuple(int(p == q) for q in range(r)) for p in range(r))
    a, h = d.roots[i], d.coroots[i]
    assert sum(x * y for x, y in zip(a, h)) == 2
    roots = set(d.roots)
    for b in d.roots:
        image = tuple(sum(M[p][q] * b[q] for q in range(r)) for p in range(r))
        assert image in roots


@given(st.sampled_from(GROUPS), st.data())
def test_weyl_group_closed_under_products(d, data):
    W = enumerate_weyl(d)
    i = data.draw(st.integers(0, len(W) - 1))
    j = data.draw(st.integers(0, len(W) - 1))
    k = W.mul(i, j)
    assert W.elements[k] == mat_mul(W.elements[i], W.elements[j])
    assert W.mul(i, W.inv(i)) == 0
    # the word of each element multiplies out to it
    M = W.elements[0]
    for g in W.generator_words[i]:
        M = mat_mul(M, d.weyl_generators[g])
    assert M == W.elements[i]


@given(st.sampled_from(GROUPS), st.data())
def test_ambient_round_trip(d, data):
    y = data.draw(st.lists(st.integers(-5, 5), min_size=d.rank, max_size=d.rank))
    assert list(d.weight_from_ambient(d.weight_to_ambient(y))) == y
    assert list(d.coweight_from_ambient(d.coweight_to_ambient(y))) == y
