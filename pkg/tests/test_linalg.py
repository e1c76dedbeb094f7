from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from regrading.linalg import FieldSpec, Matrix, QQ

F5 = FieldSpec(5)


def test_field_spec_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        FieldSpec(6)


def test_prime_field_arithmetic():
    assert F5.add(3, 4) == 2
    assert F5.mul(3, 4) == 2
    assert F5.inv(2) == 3
    assert F5.of(Fraction(1, 2)) == 3


def test_rank_zero_matrix():
    assert Matrix.zeros(QQ, 3, 4).rank() == 0


def test_rank_identity():
    assert Matrix.identity(QQ, 5).rank() == 5


def test_rank_dependent_rows():
    # row reduction by hand: second row is twice the first
    assert Matrix.from_rows(QQ, [[1, 2], [2, 4]]).rank() == 1


def test_kernel_of_identity_is_empty():
    assert Matrix.identity(QQ, 3).kernel_basis().cols == 0


def test_kernel_of_zero_matrix_is_everything():
    k = Matrix.zeros(QQ, 2, 2).kernel_basis()
    assert k.cols == 2 and k.rank() == 2


def test_kernel_single_relation():
    # direct solve: x + y = 0
    k = Matrix.from_rows(QQ, [[1, 1]]).kernel_basis()
    assert k.cols == 1
    x, y = k.column_vector(0)
    assert x == -y and x != 0


def test_solve_identity():
    m = Matrix.identity(QQ, 3)
    assert m.solve([1, 2, 3]) == (1, 2, 3)


def test_solve_underdetermined_verified_by_substitution():
    m = Matrix.from_rows(QQ, [[1, 1]])
    x = m.solve([2])
    assert x is not None and x[0] + x[1] == 2


def test_solve_inconsistent():
    assert Matrix.zeros(QQ, 2, 2).solve([1, 0]) is None


def test_inverse_and_det():
    m = Matrix.from_rows(QQ, [[2, 1], [1, 1]])
    inv = m.inverse()
    assert inv @ m == Matrix.identity(QQ, 2)
    assert m.det() == 1
    assert Matrix.from_rows(QQ, [[1, 2], [2, 4]]).inverse() is None


def test_column_space_basis_picks_original_columns():
    m = Matrix.from_rows(QQ, [[1, 2, 3], [0, 0, 1]])
    b = m.column_space_basis()
    assert b.cols == 2
    assert b.column_vector(0) == m.column_vector(0)


small_entries = st.integers(min_value=-9, max_value=9)


@st.composite
def rational_matrices(draw, max_dim=5):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    data = draw(st.lists(st.lists(small_entries, min_size=cols, max_size=cols),
                         min_size=rows, max_size=rows))
    return Matrix.from_rows(QQ, data)


@settings(max_examples=60, deadline=None)
@given(rational_matrices())
def test_rank_equals_rank_of_transpose(m):
    assert m.rank() == m.transpose().rank()


@settings(max_examples=60, deadline=None)
@given(rational_matrices())
def test_kernel_columns_annihilated_exactly(m):
    k = m.kernel_basis()
    assert k.cols == m.cols - m.rank()
    assert (m @ k).is_zero()
    assert k.rank() == k.cols


@settings(max_examples=60, deadline=None)
@given(rational_matrices(), st.lists(small_entries, min_size=1, max_size=5))
def test_solve_result_satisfies_system_exactly(m, vec):
    b = m.apply([vec[i % len(vec)] for i in range(m.cols)])
    x = m.solve(b)
    assert x is not None
    assert m.apply(x) == b


@settings(max_examples=40, deadline=None)
@given(rational_matrices(max_dim=4))
def test_rank_over_prime_field_bounded_by_rational_rank(m):
    m5 = Matrix.from_rows(F5, [[int(x) for x in row] for row in m.entries])
    assert m5.rank() <= m.rank()


def test_no_floats_anywhere():
    m = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    r, _ = m.rref()
    assert all(isinstance(x, (int, Fraction)) for row in r.entries for x in row)
