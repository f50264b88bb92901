"""Exact linear algebra over prime fields: examples and invariants."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartmod.linalg import (
    PrimeField,
    PrimeFieldMatrix,
    column_space_basis,
    extend_to_basis,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    rank,
    rref,
    solve,
    vstack,
)

F2 = PrimeField(2)
F3 = PrimeField(3)


def all_vectors(field, n):
    for combo in itertools.product(range(field.p), repeat=n):
        yield PrimeFieldMatrix.column(field, combo)


def all_invertible(field, n):
    for combo in itertools.product(range(field.p), repeat=n * n):
        m = PrimeFieldMatrix(field, np.array(combo).reshape(n, n))
        if is_invertible(m):
            yield m


def test_prime_field_rejects_bad_moduli():
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(1)
    with pytest.raises(ValueError):
        PrimeField(257)
    assert PrimeField(251).p == 251


def test_rref_identity():
    m = PrimeFieldMatrix.identity(F2, 2)
    reduced, pivots, rk = rref(m)
    assert reduced == m
    assert pivots == (0, 1)
    assert rk == 2


def test_rref_rank_one_matrix_row_equivalent():
    m = PrimeFieldMatrix.from_rows(F2, [[1, 1], [1, 1]])
    reduced, _, rk = rref(m)
    assert reduced == PrimeFieldMatrix.from_rows(F2, [[1, 1], [0, 0]])
    assert rk == 1
    # oracle: some invertible row operation takes m to the reduced form
    assert any(t @ m == reduced for t in all_invertible(F2, 2))


def test_rref_zero_matrix():
    m = PrimeFieldMatrix.zeros(F2, 3, 2)
    reduced, pivots, rk = rref(m)
    assert reduced == m
    assert pivots == ()
    assert rk == 0


def test_kernel_identity_empty():
    assert kernel_basis(PrimeFieldMatrix.identity(F3, 2)).cols == 0


def test_kernel_rank_one_enumerated():
    m = PrimeFieldMatrix.from_rows(F2, [[1, 1], [1, 1]])
    basis = kernel_basis(m)
    # oracle: enumerate all four vectors of F_2^2
    null = [v for v in all_vectors(F2, 2) if (m @ v).is_zero()]
    assert basis.cols == 1
    assert basis.col(0) in null
    assert len(null) == 2  # zero vector and (1, 1)
    assert basis.col(0) == PrimeFieldMatrix.column(F2, [1, 1])


def test_kernel_zero_matrix_full():
    assert kernel_basis(PrimeFieldMatrix.zeros(F2, 2, 2)).cols == 2


def test_solve_identity():
    b = PrimeFieldMatrix.column(F3, [2, 1])
    assert solve(PrimeFieldMatrix.identity(F3, 2), b) == b


def test_solve_inconsistent_enumerated():
    a = PrimeFieldMatrix.from_rows(F2, [[1, 1], [1, 1]])
    b = PrimeFieldMatrix.column(F2, [1, 0])
    assert solve(a, b) is None
    # oracle: none of the four candidates works
    assert all(a @ x != b for x in all_vectors(F2, 2))


def test_solve_consistent_enumerated():
    a = PrimeFieldMatrix.from_rows(F2, [[1, 1], [1, 1]])
    b = PrimeFieldMatrix.column(F2, [1, 1])
    x = solve(a, b)
    assert x is not None and a @ x == b
    assert (int(x.array[0, 0]) + int(x.array[1, 0])) % 2 == 1
    solutions = [v for v in all_vectors(F2, 2) if a @ v == b]
    assert x in solutions


def test_solve_dimension_mismatch_is_error():
    a = PrimeFieldMatrix.identity(F2, 2)
    b = PrimeFieldMatrix.column(F2, [1, 0, 0])
    with pytest.raises(ValueError):
        solve(a, b)


def test_multiply_by_identity():
    m = PrimeFieldMatrix.from_rows(F3, [[1, 2], [0, 1]])
    assert PrimeFieldMatrix.identity(F3, 2) @ m == m
    assert m @ PrimeFieldMatrix.identity(F3, 2) == m


def test_kronecker_scalar():
    c = PrimeFieldMatrix.from_rows(F3, [[2]])
    m = PrimeFieldMatrix.from_rows(F3, [[1, 2], [0, 1]])
    assert c.kronecker(m) == m.scale(2)
    a = PrimeFieldMatrix.from_rows(F3, [[1, 2]])
    b = PrimeFieldMatrix.from_rows(F3, [[1], [2]])
    assert a.kronecker(b).rows == 2 and a.kronecker(b).cols == 2


def test_direct_sum_diagonal():
    a = PrimeFieldMatrix.from_rows(F3, [[1]])
    b = PrimeFieldMatrix.from_rows(F3, [[2]])
    assert a.direct_sum(b) == PrimeFieldMatrix.from_rows(F3, [[1, 0], [0, 2]])


def test_stack_and_shape_errors():
    a = PrimeFieldMatrix.identity(F2, 2)
    b = PrimeFieldMatrix.zeros(F2, 2, 1)
    assert hstack([a, b]).cols == 3
    assert vstack([a, PrimeFieldMatrix.zeros(F2, 1, 2)]).rows == 3
    with pytest.raises(ValueError):
        a @ PrimeFieldMatrix.identity(F2, 3)
    with pytest.raises(ValueError):
        a + PrimeFieldMatrix.zeros(F2, 1, 1)


def test_empty_shapes_supported():
    empty = PrimeFieldMatrix.zeros(F2, 0, 3)
    assert kernel_basis(empty).cols == 3
    assert rank(empty) == 0
    tall = PrimeFieldMatrix.zeros(F2, 3, 0)
    assert kernel_basis(tall).cols == 0
    assert (empty @ tall.transpose().transpose()).rows == 0


def test_inverse_and_extend():
    m = PrimeFieldMatrix.from_rows(F2, [[1, 1], [0, 1]])
    inv = inverse(m)
    assert inv is not None and m @ inv == PrimeFieldMatrix.identity(F2, 2)
    cols = PrimeFieldMatrix.from_rows(F2, [[1], [1]])
    full = extend_to_basis(cols)
    assert is_invertible(full)
    assert full.col(0) == cols.col(0)


@st.composite
def matrices(draw, p):
    field = PrimeField(p)
    rows = draw(st.integers(min_value=0, max_value=8))
    cols = draw(st.integers(min_value=0, max_value=8))
    entries = draw(
        st.lists(
            st.integers(min_value=0, max_value=p - 1),
            min_size=rows * cols,
            max_size=rows * cols,
        )
    )
    return PrimeFieldMatrix(field, np.array(entries, dtype=np.int64).reshape(rows, cols))


@settings(max_examples=60, deadline=None)
@given(st.one_of(matrices(2), matrices(3)))
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).cols == m.cols


@settings(max_examples=60, deadline=None)
@given(st.one_of(matrices(2), matrices(3)))
def test_rref_idempotent(m):
    reduced, _, _ = rref(m)
    assert rref(reduced)[0] == reduced


@settings(max_examples=60, deadline=None)
@given(st.one_of(matrices(2), matrices(3)), st.integers(min_value=0, max_value=3))
def test_solve_exact_on_consistent_systems(m, width):
    field = m.field
    y = PrimeFieldMatrix(
        field,
        np.arange(m.cols * width, dtype=np.int64).reshape(m.cols, width) % field.p,
    )
    b = m @ y
    x = solve(m, b)
    assert x is not None
    assert m @ x == b


@settings(max_examples=40, deadline=None)
@given(matrices(2))
def test_kernel_columns_annihilated_and_independent(m):
    basis = kernel_basis(m)
    if basis.cols:
        assert (m @ basis).is_zero()
        assert rank(basis) == basis.cols


def test_column_space_basis_pivots():
    m = PrimeFieldMatrix.from_rows(F2, [[1, 1, 0], [1, 1, 1]])
    basis = column_space_basis(m)
    assert basis.cols == rank(m) == 2
    assert basis.col(0) == m.col(0)
