import os
import sys

import numpy as np
import pytest
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from flasquekit.algebra.integer_matrix import (  # noqa: E402
    as_int_matrix,
    determinant,
    elementary_divisors,
    int_matmul,
    matrix_from_rows,
    smith_decomposition,
    sparse_columns,
    unimodular_inverse,
)
from flasquekit.algebra.sparse import (  # noqa: E402
    EchelonLattice,
    HowellLattice,
    combine,
    from_dense,
    hermite_basis,
    kernel_basis,
    kernel_mod,
    reduce_mod,
    to_dense,
    xgcd,
)
from flasquekit.utils.errors import InvalidInputError  # noqa: E402


@pytest.mark.parametrize("a,b", [(12, 18), (-4, 6), (0, 5), (7, 0), (-9, -12)])
def test_xgcd_bezout(a, b):
    x, y, g = xgcd(a, b)
    assert a * x + b * y == g
    assert g >= 0
    assert g == np.gcd(a, b)


def test_combine_drops_zero_entries():
    assert combine({0: 1, 1: 2}, 2, {1: 4}, -1) == {0: 2}


def test_echelon_insert_reports_dependencies():
    lattice = EchelonLattice(track=True)
    assert lattice.insert({0: 2, 1: 1}, {0: 1}) is None
    assert lattice.insert({0: 4, 1: 2}, {1: 1}) == {0: -2, 1: 1}
    assert len(lattice) == 1


def test_echelon_express_and_contains():
    lattice = EchelonLattice()
    lattice.insert({0: 2})
    lattice.insert({1: 3})
    lattice.hermite()
    assert lattice.express({0: 4, 1: -3}) == [2, -1]
    assert lattice.contains({0: 2, 1: 6})
    assert not lattice.contains({0: 1})
    assert lattice.express({2: 1}) is None


def test_hermite_basis_is_canonical():
    first = hermite_basis([{0: 2, 1: 1}, {0: 1, 1: 1}])
    second = hermite_basis([{0: 1}, {1: 1}])
    assert first == second == [{0: 1}, {1: 1}]


def test_hermite_reduces_above_pivots():
    rows = hermite_basis([{0: 1, 1: 5}, {1: 3}])
    assert rows == [{0: 1, 1: 2}, {1: 3}]


def test_kernel_basis_of_difference_map():
    # columns of [[1, -1, 0], [0, 1, -1]]
    columns = [{0: 1}, {0: -1, 1: 1}, {1: -1}]
    assert kernel_basis(columns) == [{0: 1, 1: 1, 2: 1}]


def test_kernel_basis_is_saturated():
    # 2x + 4y = 0 has kernel spanned by (2, -1), not a multiple of it
    assert kernel_basis([{0: 2}, {0: 4}]) == [{0: 2, 1: -1}]


def test_howell_lattice_closes_under_pivot_multiples():
    lattice = HowellLattice(4)
    lattice.insert({0: 2, 1: 1})
    assert lattice.pivots == [0, 1]
    assert lattice.rows() == [{0: 2, 1: 1}, {1: 2}]
    assert lattice.order() == 4
    # 2·(2, 1) = (0, 2) only shows up through the closure row
    assert lattice.contains({1: 2})
    assert not lattice.contains({1: 1})
    assert lattice.reduce({0: 2, 1: 3}) == ({}, {})
    assert lattice.reduce({1: 3})[0] == {1: 1}


def test_howell_lattice_entries_stay_reduced():
    lattice = HowellLattice(6)
    for v in ({0: 4, 1: 9, 2: -5}, {0: 9, 1: 4, 2: 1}, {0: -2, 2: 7}):
        lattice.insert(v)
    for row in lattice.rows():
        assert all(0 < x < 6 for x in row.values())
        assert 6 % row[min(row)] == 0


def test_kernel_mod_of_a_row():
    relations = kernel_mod([{0: 2}, {0: 3}], 6)
    assert relations
    for t in relations:
        assert (2 * t.get(0, 0) + 3 * t.get(1, 0)) % 6 == 0
    span = HowellLattice(6)
    for t in relations:
        span.insert(t)
    # 2a + 3b = 0 mod 6 has 36 / 6 solutions
    assert span.order() == 6


def test_howell_lattice_validation_and_reduce_mod():
    with pytest.raises(ValueError):
        HowellLattice(0)
    assert reduce_mod({0: 7, 1: -1, 2: 12}, 6) == {0: 1, 1: 5}
    assert HowellLattice(1).insert({0: 3}) == []


def test_dense_round_trip():
    assert to_dense(from_dense([0, 3, 0, -1]), 4) == [0, 3, 0, -1]


def test_as_int_matrix_rejects_non_integers():
    with pytest.raises(InvalidInputError):
        as_int_matrix([[1.5, 0], [0, 1]])
    with pytest.raises(InvalidInputError):
        as_int_matrix([1, 2, 3])


def test_int_matmul_promotes_on_overflow():
    big = as_int_matrix([[2**40]])
    product = int_matmul(big, big)
    assert product.dtype == object
    assert int(product[0, 0]) == 2**80


@pytest.mark.parametrize(
    "rows",
    [
        [[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
        [[1, 2], [3, 4], [5, 6]],
        [[6, 0, 0, 0], [0, 10, 0, 0]],
    ],
)
def test_smith_matches_sympy_invariant_factors(rows):
    matrix = as_int_matrix(rows)
    snf = smith_decomposition(matrix)
    expected = [abs(int(x)) for x in invariant_factors(Matrix(rows))]
    assert [d for d in snf.diagonal if d] == [d for d in expected if d]
    check = int_matmul(int_matmul(snf.left, matrix), snf.right)
    for i in range(check.shape[0]):
        for j in range(check.shape[1]):
            want = snf.diagonal[i] if i == j and i < len(snf.diagonal) else 0
            assert int(check[i, j]) == want


def test_elementary_divisors_of_rectangular_matrix():
    assert elementary_divisors(as_int_matrix([[6, 0, 0, 0], [0, 10, 0, 0]])) == (2, 30)


def test_determinant_and_unimodular_inverse():
    m = as_int_matrix([[2, 1], [1, 1]])
    assert determinant(m) == 1
    inverse = unimodular_inverse(m)
    assert np.array_equal(int_matmul(m, inverse), np.eye(2, dtype=np.int64))
    with pytest.raises(InvalidInputError):
        unimodular_inverse(as_int_matrix([[2, 0], [0, 1]]))


def test_sparse_columns_and_matrix_from_rows():
    m = as_int_matrix([[1, 0], [0, 2]])
    assert sparse_columns(m) == [{0: 1}, {1: 2}]
    assert np.array_equal(matrix_from_rows([{0: 1}, {1: 2}], 2), m)


def test_smith_of_zero_matrix():
    snf = smith_decomposition(as_int_matrix([[0, 0], [0, 0]]))
    assert snf.rank == 0
    assert elementary_divisors(as_int_matrix([[0, 0]])) == ()
