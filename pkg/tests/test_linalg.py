from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, strategies as st

from coulomb_weyl.linalg import (column_echelon, gf2_in_span, gf2_rank, gf2_solve, integer_kernel,
                                 integral_sublattice, mat_inverse_fraction, row_hnf, smith_diagonal,
                                 solve_integer)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


# ---------------------------------------------------------------- oracles

def test_smith_known_values():
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3) == [2, 6, 12]
    assert smith_diagonal([[2, 0], [0, 3]], 2) == [1, 6]
    assert smith_diagonal([[0, 0], [0, 0]], 2) == []


def test_solve_integer_detects_parity_obstruction():
    # 2x = 1 has no integer solution, 2x = 4 does
    assert solve_integer([[2]], [1], 1) is None
    x, ker = solve_integer([[2]], [4], 1)
    assert x == [2] and ker == []


def test_kernel_of_rank_one_row():
    ker = integer_kernel([[1, 1, 1]], 3)
    assert len(ker) == 2
    for v in ker:
        assert sum(v) == 0


def test_row_hnf_of_index_two_lattice():
    H = row_hnf([[1, 1], [1, -1]], 2)
    # lattice {(a, b): a = b mod 2} has index 2
    assert abs(H[0][0] * H[1][1] - H[0][1] * H[1][0]) == 2


def test_integral_sublattice_of_diagonal_kernel():
    # pairings of the SU(2)^2 fundamental weights with the element (1/2, 1/2)
    Y = integral_sublattice([[Fraction(1, 2)], [Fraction(1, 2)]])
    assert len(Y) == 2
    assert abs(Y[0][0] * Y[1][1] - Y[0][1] * Y[1][0]) == 2
    for y in Y:
        assert (y[0] + y[1]) % 2 == 0


def test_gf2_solve_small_system():
    # x0 + x1 = 1, x1 + x2 = 0
    x, ker = gf2_solve([0b011, 0b110], [1, 0], 3)
    assert ((x & 1) ^ ((x >> 1) & 1)) == 1
    assert (((x >> 1) & 1) ^ ((x >> 2) & 1)) == 0
    assert ker == [0b111] or len(ker) == 1
    assert gf2_solve([0b1, 0b1], [0, 1], 1) is None


def test_gf2_rank_and_span():
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_in_span(0b101, [0b011, 0b110])
    assert not gf2_in_span(0b001, [0b011, 0b110])


# ---------------------------------------------------------------- properties

@given(matrices())
def test_smith_matches_sympy(A):
    c = len(A[0])
    ours = smith_diagonal(A, c)
    snf = smith_normal_form(sympy.Matrix(A), domain=sympy.ZZ)
    theirs = sorted(abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0)
    assert ours == theirs


@given(matrices())
def test_column_echelon_is_unimodular_factorization(A):
    c = len(A[0])
    H, V, pivots = column_echelon(A, c)
    AV = [[sum(A[i][k] * V[k][j] for k in range(c)) for j in range(c)] for i in range(len(A))]
    assert AV == H
    det = sympy.Matrix(V).det()
    assert abs(det) == 1
    for j in range(len(pivots), c):
        assert all(H[i][j] == 0 for i in range(len(A)))


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_integer_roundtrip(A, x0):
    c = len(A[0])
    x0 = x0[:c]
    b = mat_vec(A, x0)
    sol = solve_integer(A, b, c)
    assert sol is not None
    x, ker = sol
    assert mat_vec(A, x) == b
    for k in ker:
        assert mat_vec(A, k) == [0] * len(A)
    assert len(ker) == c - sympy.Matrix(A).rank()


@given(st.lists(st.integers(0, 2 ** 5 - 1), min_size=1, max_size=6), st.integers(0, 2 ** 5 - 1))
def test_gf2_solution_satisfies_rows(rows, x0):
    rhs = [bin(r & x0).count("1") % 2 for r in rows]
    x, ker = gf2_solve(rows, rhs, 5)
    assert [bin(r & x).count("1") % 2 for r in rows] == rhs
    for k in ker:
        assert all(bin(r & k).count("1") % 2 == 0 for r in rows)
    assert len(ker) == 5 - gf2_rank(rows)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_fraction_inverse(M):
    if sympy.Matrix(M).det() == 0:
        return
    inv = mat_inverse_fraction([[Fraction(x) for x in row] for row in M])
    prod = [[sum(M[i][k] * inv[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert prod == [[int(i == j) for j in range(3)] for i in range(3)]
