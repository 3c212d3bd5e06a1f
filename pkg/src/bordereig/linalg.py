"""Dense complex linear algebra primitives.

Matrices are ``complex128`` numpy arrays of shape ``(rows, cols)`` and
vectors are 1-D ``complex128`` arrays.  Every public function validates its
inputs and returns a fresh array; inputs are never modified.
"""

import math

import numpy as np

from .errors import DimensionError, NotSquareError, PermutationError

__all__ = [
    "as_matrix", "as_vector", "as_square", "identity", "matvec",
    "inner_product", "norm", "max_norm", "lu_factor", "lu_solve",
    "determinant", "singularity_tolerance", "permute_symmetric",
    "conjugate_transpose", "is_hermitian", "hermitian_part",
    "householder_vector", "hessenberg",
]

#: relative pivot threshold below which a matrix is treated as singular
TAU_DET = 1e-12


def as_matrix(m):
    """Return ``m`` as a finite 2-D complex array (a copy)."""
    a = np.array(m, dtype=np.complex128, copy=True)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def as_square(m):
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {a.shape}")
    return a


def as_vector(v):
    """Return ``v`` as a finite 1-D complex array (a copy)."""
    x = np.array(v, dtype=np.complex128, copy=True)
    if x.ndim != 1 or x.size < 1:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def identity(n):
    return np.eye(n, dtype=np.complex128)


def matvec(m, v):
    a, x = as_matrix(m), as_vector(v)
    if a.shape[1] != x.size:
        raise DimensionError(f"cannot multiply {a.shape} matrix by vector of dim {x.size}")
    return a @ x


def inner_product(u, v):
    """Return ``u^H v``; conjugate-linear in the first argument."""
    x, y = as_vector(u), as_vector(v)
    if x.size != y.size:
        raise DimensionError(f"dimension mismatch: {x.size} vs {y.size}")
    return complex(np.vdot(x, y))


def norm(v):
    """Euclidean norm from a correctly rounded sum of squares.

    Appending zero entries cannot change the result, so a zero-padded
    vector has exactly the norm of the original.
    """
    x = np.asarray(v, dtype=np.complex128).ravel()
    return math.sqrt(math.fsum(np.concatenate([x.real ** 2, x.imag ** 2])))


def max_norm(m):
    """Largest entry modulus; zero for the zero matrix."""
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def singularity_tolerance(m):
    """Pivot magnitude below which ``m`` counts as numerically singular."""
    return TAU_DET * max(max_norm(m), np.finfo(float).tiny)


def lu_factor(m):
    """LU factorization with partial pivoting, ``P m = L U``.

    Returns ``(lu, piv, sign)`` where ``lu`` packs the unit-lower ``L`` below
    the diagonal and ``U`` on and above it, ``piv[k]`` is the row swapped
    into position ``k`` at step ``k``, and ``sign`` is the permutation parity.
    """
    lu = as_square(m)
    n = lu.shape[0]
    piv = np.arange(n)
    sign = 1.0
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        piv[k] = p
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            sign = -sign
        pivot = lu[k, k]
        if pivot == 0:
            continue
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    piv[n - 1] = n - 1
    return lu, piv, sign


def lu_solve(factors, b):
    """Solve ``m x = b`` from the output of :func:`lu_factor`."""
    lu, piv, _ = factors
    x = np.array(b, dtype=np.complex128, copy=True)
    n = lu.shape[0]
    if x.shape[0] != n:
        raise DimensionError(f"rhs has {x.shape[0]} rows, matrix has {n}")
    for k in range(n):
        p = piv[k]
        if p != k:
            x[[k, p]] = x[[p, k]]
    for k in range(n):
        x[k + 1:] -= np.multiply.outer(lu[k + 1:, k], x[k])
    for k in range(n - 1, -1, -1):
        if lu[k, k] == 0:
            raise ZeroDivisionError("singular matrix in lu_solve")
        x[k] /= lu[k, k]
        x[:k] -= np.multiply.outer(lu[:k, k], x[k])
    return x


def determinant(m):
    """Determinant via LU with partial pivoting.

    A pivot below :func:`singularity_tolerance` makes the result exactly 0.
    """
    a = as_square(m)
    lu, _, sign = lu_factor(a)
    d = np.diag(lu)
    if np.min(np.abs(d)) <= singularity_tolerance(a):
        return 0j
    return complex(sign * np.prod(d))


def _check_permutation(perm, n):
    p = np.asarray(perm)
    if p.ndim != 1 or p.size != n or not np.issubdtype(p.dtype, np.integer):
        raise PermutationError(f"expected {n} integer indices, got {perm!r}")
    if not np.array_equal(np.sort(p), np.arange(n)):
        raise PermutationError(f"{list(p)} is not a permutation of range({n})")
    return p


def permute_symmetric(m, perm):
    """Reorder rows and columns by the same permutation: ``m[perm][:, perm]``."""
    a = as_square(m)
    p = _check_permutation(perm, a.shape[0])
    return a[np.ix_(p, p)]


def conjugate_transpose(m):
    return np.ascontiguousarray(as_matrix(m).conj().T)


def is_hermitian(m, rtol=0.0):
    """True when ``max|m - m^H| <= rtol * max|m|`` (exact for ``rtol=0``)."""
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return max_norm(a - a.conj().T) <= rtol * max_norm(a)


def hermitian_part(m):
    """``(m + m^H) / 2``, which is Hermitian bit for bit."""
    a = as_square(m)
    return (a + a.conj().T) / 2


def householder_vector(x):
    """Unit ``v`` with ``(I - 2 v v^H) x`` parallel to ``e_0``, or None."""
    alpha = np.linalg.norm(x)
    if alpha == 0 or np.linalg.norm(x[1:]) == 0:
        return None
    phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
    v = x.copy()
    v[0] += phase * alpha
    return v / np.linalg.norm(v)


def hessenberg(m):
    """Upper Hessenberg form of ``m`` by Householder similarity (unitary, so spectrum-preserving)."""
    a = as_square(m)
    n = a.shape[0]
    h = a.copy()
    for k in range(n - 2):
        v = householder_vector(h[k + 1:, k])
        if v is None:
            continue
        h[k + 1:, k:] -= 2 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0
    return h
