"""Seeded random test instances.

Every generator takes a ``numpy.random.Generator`` and returns plain arrays,
so instances are reproducible from the seed alone.  Eigenbases are built
from random unitaries, so the instance and its decomposition are known
together without calling an eigensolver.
"""

import numpy as np

from .eigen import EigenDecomposition

__all__ = [
    "complex_normal", "random_unitary", "normal_matrix", "random_hermitian",
    "bordered", "hermitian_border_along", "almost_hermitian_border_along",
    "planted_zero_coefficients", "planted_degeneracy", "parallel_borders",
    "row_constrained", "random_growth_steps",
]


def complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    q, r = np.linalg.qr(complex_normal(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def normal_matrix(values, u):
    """``u diag(values) u^H`` with its exact decomposition."""
    values = np.asarray(values, dtype=np.complex128)
    b = (u * values) @ u.conj().T
    return b, EigenDecomposition.from_pairs(b, values, u, source="constructed")


def random_hermitian(rng, n, spread=3.0):
    """Hermitian ``n x n`` with well separated random eigenvalues."""
    values = np.sort(rng.uniform(-spread, spread, n))
    b, _ = normal_matrix(values, random_unitary(rng, n))
    b = (b + b.conj().T) / 2
    return b


def bordered(b, cols, rows, corner):
    """Assemble ``[[B, cols], [rows, corner]]``."""
    b = np.asarray(b, dtype=np.complex128)
    cols = np.asarray(cols, dtype=np.complex128).reshape(b.shape[0], -1)
    rows = np.asarray(rows, dtype=np.complex128).reshape(-1, b.shape[0])
    corner = np.atleast_2d(np.asarray(corner, dtype=np.complex128))
    return np.block([[b, cols], [rows, corner]])


def _hermitian_seed(rng, n):
    values = np.sort(rng.uniform(-3, 3, n))
    u = random_unitary(rng, n)
    b = (u * values) @ u.conj().T
    b = (b + b.conj().T) / 2
    return b, values, u


def hermitian_border_along(rng, n, j):
    """Hermitian ``A`` whose single border column is ``c * v_j``.

    Returns ``(A, values, vectors)`` for the leading block ``B``.
    """
    b, values, u = _hermitian_seed(rng, n)
    nu = complex_normal(rng, 1)[0] * u[:, j]
    a = bordered(b, nu, nu.conj(), rng.uniform(-3, 3))
    return a, values, u


def almost_hermitian_border_along(rng, n, j):
    """Like :func:`hermitian_border_along` but the row is ``beta * nu^H``."""
    b, values, u = _hermitian_seed(rng, n)
    nu = complex_normal(rng, 1)[0] * u[:, j]
    beta = complex_normal(rng, 1)[0]
    a = bordered(b, nu, beta * nu.conj(), complex_normal(rng, 1)[0])
    return a, values, u


def planted_zero_coefficients(rng, n, zeros):
    """Hermitian ``A`` with one border orthogonal to ``zeros`` eigenvectors of ``B``.

    Returns ``(A, values, vectors, planted_indices)``.
    """
    b, values, u = _hermitian_seed(rng, n)
    planted = np.sort(rng.choice(n, size=zeros, replace=False))
    coeff = complex_normal(rng, n)
    coeff[planted] = 0
    nu = u @ coeff
    a = bordered(b, nu, nu.conj(), rng.uniform(-3, 3))
    return a, values, u, planted


def planted_degeneracy(rng, n, mult, n_border):
    """Hermitian ``B`` with one eigenvalue of multiplicity ``mult`` and arbitrary borders.

    Returns ``(A, values, vectors, degenerate_value)``.
    """
    distinct = rng.uniform(-3, 3, n - mult + 1)
    lam = distinct[0]
    values = np.sort(np.concatenate([np.full(mult - 1, lam), distinct]))
    u = random_unitary(rng, n)
    b = (u * values) @ u.conj().T
    b = (b + b.conj().T) / 2
    cols = complex_normal(rng, (n, n_border))
    rows = complex_normal(rng, (n_border, n))
    corner = complex_normal(rng, (n_border, n_border))
    return bordered(b, cols, rows, corner), values, u, lam


def parallel_borders(rng, n, n_border, i):
    """Hermitian ``A`` whose ``n_border`` border columns are all multiples of ``v_i``."""
    b, values, u = _hermitian_seed(rng, n)
    scales = complex_normal(rng, n_border)
    cols = np.outer(u[:, i], scales)
    c = complex_normal(rng, (n_border, n_border))
    corner = (c + c.conj().T) / 2
    return bordered(b, cols, cols.conj().T, corner), values, u


def row_constrained(rng, n, zeros):
    """Non-Hermitian normal ``B`` whose border row annihilates ``zeros`` eigenvectors.

    The border column is generic, so only the row side carries constraints.
    Returns ``(A, values, vectors, planted_indices)``.
    """
    values = complex_normal(rng, n) * 1.5
    u = random_unitary(rng, n)
    b = (u * values) @ u.conj().T
    planted = np.sort(rng.choice(n, size=zeros, replace=False))
    coeff = complex_normal(rng, n)
    coeff[planted] = 0
    row = coeff @ u.conj().T  # row @ u[:, k] == coeff[k]
    col = complex_normal(rng, n)
    a = bordered(b, col, row, complex_normal(rng, 1)[0])
    return a, values, u, planted


def random_growth_steps(rng, order, count, max_coupled=3):
    """``count`` random ``(indices, alphas, corner)`` steps starting from ``order``."""
    steps = []
    for s in range(count):
        size = order + s
        k = int(rng.integers(1, min(max_coupled, size) + 1))
        idx = sorted(int(i) for i in rng.choice(size, size=k, replace=False))
        alphas = [complex(a) for a in complex_normal(rng, k)]
        steps.append((idx, alphas, float(rng.uniform(-3, 3))))
    return steps
