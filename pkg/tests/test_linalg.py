import numpy as np
import pytest
from hypothesis import given, strategies as st

from bordereig.errors import DimensionError, NotSquareError, PermutationError
from bordereig.linalg import (as_matrix, conjugate_transpose, determinant, hermitian_part,
                              identity, inner_product, is_hermitian, lu_factor, lu_solve,
                              matvec, permute_symmetric)
from strategies import complex_matrices, complexes, seeds


def test_matvec_identity_zero_and_swap():
    assert np.array_equal(matvec(identity(3), [1, 2, 3]), [1, 2, 3])
    assert np.array_equal(matvec(np.zeros((2, 2)), [5, 7]), [0, 0])
    assert np.array_equal(matvec([[0, 1], [1, 0]], [2 + 1j, -3]), [-3, 2 + 1j])


def test_matvec_dimension_mismatch():
    with pytest.raises(DimensionError):
        matvec(identity(3), [1, 2])


def test_inner_product_is_conjugate_linear_in_first_argument():
    assert inner_product([1, 0], [0, 1]) == 0
    assert inner_product([1j, 0], [1j, 0]) == 1
    s = 1 / np.sqrt(2)
    assert abs(inner_product([s, s], [s, -s])) < 1e-16
    assert inner_product([1j], [1]) == -1j
    with pytest.raises(DimensionError):
        inner_product([1, 2], [1, 2, 3])


def test_determinant_examples():
    assert determinant(identity(4)) == 1
    assert determinant(np.diag([2, 3, 4])) == 24
    m = np.array([[1, 2, 3], [4, 5, 6], [1, 2, 3]], dtype=complex)
    assert abs(determinant(m)) <= 1e-12
    # frozen: det [[2, i], [1, 3]] = 6 - i
    assert abs(determinant([[2, 1j], [1, 3]]) - (6 - 1j)) < 1e-15
    with pytest.raises(NotSquareError):
        determinant(np.ones((2, 3)))


def test_entries_must_be_finite():
    with pytest.raises(ValueError):
        as_matrix([[1, np.nan]])
    with pytest.raises(DimensionError):
        as_matrix([1, 2])


def test_lu_solve_recovers_solution(rng):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    x = rng.normal(size=6) + 1j * rng.normal(size=6)
    assert np.allclose(lu_solve(lu_factor(a), a @ x), x, atol=1e-12)


def test_permute_symmetric_examples():
    assert np.array_equal(permute_symmetric(identity(3), [2, 0, 1]), identity(3))
    m = np.arange(9.0).reshape(3, 3)
    swap = [1, 0, 2]
    assert np.array_equal(permute_symmetric(permute_symmetric(m, swap), swap), m)
    assert permute_symmetric(m, swap)[0, 0] == m[1, 1]
    with pytest.raises(PermutationError):
        permute_symmetric(m, [0, 0, 1])
    with pytest.raises(PermutationError):
        permute_symmetric(m, [0, 1])


def test_conjugate_transpose_examples():
    s = np.array([[1, 2], [2, 5]], dtype=complex)
    assert np.array_equal(conjugate_transpose(s), s)
    assert np.array_equal(conjugate_transpose([[0, 1j], [0, 0]]), [[0, 0], [-1j, 0]])


def test_hermitian_part_is_exactly_hermitian(rng):
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = hermitian_part(a)
    assert is_hermitian(h)
    assert not is_hermitian(a)


@given(complex_matrices(square=False))
def test_conjugate_transpose_is_an_involution(m):
    assert np.array_equal(conjugate_transpose(conjugate_transpose(m)), m)


@given(st.lists(complexes, min_size=1, max_size=8))
def test_inner_product_with_itself_is_real_nonnegative(u):
    v = inner_product(u, u)
    assert v.imag == 0 and v.real >= 0
    biggest = max(abs(z) for z in u)
    if biggest == 0:
        assert v == 0
    elif biggest >= 1e-7:
        assert v.real > 1e-14


@given(seeds, st.integers(1, 7))
def test_determinant_invariant_under_symmetric_permutation(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    perm = rng.permutation(n)
    d0, d1 = determinant(m), determinant(permute_symmetric(m, perm))
    assert abs(d1 - d0) <= 1e-12 * max(abs(d0), 1.0)


@given(seeds, st.integers(1, 7))
def test_matvec_distributes(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    u, v = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
    lhs, rhs = matvec(m, u + v), matvec(m, u) + matvec(m, v)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * max(1.0, np.max(np.abs(lhs)))


@given(seeds, st.integers(1, 6))
def test_determinant_matches_product_of_eigenvalues(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ref = np.prod(np.linalg.eigvals(m))
    assert abs(determinant(m) - ref) <= 1e-10 * max(1.0, abs(ref))
