import numpy as np
import pytest
from hypothesis import given, strategies as st

from bordereig.eigen import (EigenDecomposition, cluster_degenerate, eigen_oracle,
                             eigvals_oracle, validate_decomposition)
from bordereig.errors import ConvergenceError, NotSquareError
from bordereig.linalg import permute_symmetric
from bordereig.polyroots import match_multisets
from strategies import seeds


def hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def general(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_diagonal_is_sorted_with_permuted_basis():
    d = eigen_oracle(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(d.values, [1, 2, 3])
    assert np.allclose(np.abs(d.vectors), np.eye(3)[:, [1, 2, 0]])
    assert d.orthonormal and d.source == "computed"


def test_pauli_x():
    d = eigen_oracle([[0, 1], [1, 0]])
    assert np.allclose(d.values, [-1, 1], atol=1e-15)
    s = 1 / np.sqrt(2)
    assert np.allclose(d.vectors[:, 0], [s, -s]) and np.allclose(d.vectors[:, 1], [s, s])


def test_hermitian_reconstruction(rng):
    m = hermitian(rng, 8)
    d = eigen_oracle(m)
    assert np.max(np.abs((d.vectors * d.values) @ d.vectors.conj().T - m)) <= 1e-9
    assert d.orthonormal


def test_matches_independent_solver(rng):
    for n in (1, 2, 5, 12, 30):
        for m in (hermitian(rng, n), general(rng, n)):
            ours = eigvals_oracle(m)
            assert match_multisets(ours, np.linalg.eigvals(m), 1e-9 * max(1, n)).ok


def test_general_vectors_have_small_residual(rng):
    m = general(rng, 10)
    d = eigen_oracle(m)
    assert d.reliable and not d.orthonormal
    assert np.max(np.linalg.norm(m @ d.vectors - d.vectors * d.values, axis=0)) <= 1e-9 * np.linalg.norm(m)
    assert np.allclose(np.linalg.norm(d.vectors, axis=0), 1, atol=1e-12)


def test_defective_matrix_is_flagged_not_hidden():
    d = eigen_oracle([[1, 1], [0, 1]])
    assert np.allclose(d.values, [1, 1])
    assert not d.orthonormal


def test_iteration_budget_is_enforced(rng):
    with pytest.raises(ConvergenceError):
        eigen_oracle(general(rng, 8), max_iter=1)
    with pytest.raises(NotSquareError):
        eigen_oracle(np.ones((2, 3)))


def test_validate_decomposition_examples():
    ok = validate_decomposition(np.diag([1, 2]), [1, 2], np.eye(2))
    assert ok.max_residual == 0 and ok.orthonormal and not ok.flagged
    v = np.eye(2, dtype=complex)
    v[1, 0] = 1e-3
    bad = validate_decomposition(np.diag([1, 2]), [1, 2], v)
    assert abs(bad.residuals[0] - 1e-3) < 1e-9 and bad.flagged == (0,)
    c = 0.1
    skew = np.array([[1, c], [0, np.sqrt(1 - c * c)]])
    res = validate_decomposition(np.eye(2), [1, 1], skew)
    assert abs(res.gram_deviation - 0.1) < 1e-12 and not res.orthonormal


def test_from_pairs_certifies_by_measurement(rng):
    m = hermitian(rng, 4)
    d = eigen_oracle(m)
    user = EigenDecomposition.from_pairs(m, d.values, d.vectors * 3)
    assert user.source == "user-supplied" and user.orthonormal
    assert np.allclose(np.linalg.norm(user.vectors, axis=0), 1)


def test_cluster_degenerate_examples():
    c = cluster_degenerate([1, 1, 2], 1e-8)
    assert [(x.value, x.multiplicity) for x in c] == [(1, 2), (2, 1)]
    c = cluster_degenerate([0, 1e-12, 5], 1e-9)
    assert [x.multiplicity for x in c] == [2, 1] and abs(c[0].value) < 1e-12
    c = cluster_degenerate([0.1, 0.5, 0.9, 1.7], 0.3)
    assert [x.multiplicity for x in c] == [1, 1, 1, 1]
    # transitive closure: 0 ~ 0.2 ~ 0.4 although |0 - 0.4| > tol
    assert [x.multiplicity for x in cluster_degenerate([0, 0.2, 0.4], 0.25)] == [3]


@given(seeds, st.integers(2, 7))
def test_spectrum_invariant_under_symmetric_permutation(seed, n):
    rng = np.random.default_rng(seed)
    m = general(rng, n)
    perm = rng.permutation(n)
    assert match_multisets(eigvals_oracle(m), eigvals_oracle(permute_symmetric(m, perm)), 1e-9 * n).ok


@given(seeds, st.integers(1, 7))
def test_conjugate_transpose_conjugates_the_spectrum(seed, n):
    rng = np.random.default_rng(seed)
    m = general(rng, n)
    assert match_multisets(np.conj(eigvals_oracle(m)), eigvals_oracle(m.conj().T), 1e-9 * n).ok


@given(seeds, st.integers(1, 8), st.booleans())
def test_trace_equals_eigenvalue_sum(seed, n, herm):
    rng = np.random.default_rng(seed)
    m = hermitian(rng, n) if herm else general(rng, n)
    assert abs(np.trace(m) - np.sum(eigen_oracle(m).values)) <= 1e-9 * n


@given(seeds, st.integers(1, 8))
def test_hermitian_decomposition_invariants(seed, n):
    rng = np.random.default_rng(seed)
    m = hermitian(rng, n)
    d = eigen_oracle(m)
    gram = d.vectors.conj().T @ d.vectors
    assert np.max(np.abs(gram - np.eye(n))) <= 1e-10
    assert np.max(np.linalg.norm(m @ d.vectors - d.vectors * d.values, axis=0)) <= 1e-9 * np.linalg.norm(m)
    assert np.all(d.values.imag == 0) and np.all(np.diff(d.values.real) >= 0)
