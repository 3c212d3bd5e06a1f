"""Reference dense eigensolver.

Hermitian input goes through Householder tridiagonalization followed by
implicit-shift QL on the real symmetric tridiagonal.  Anything else is
reduced to upper Hessenberg form and driven to triangular form by
single-shift complex QR; eigenvectors then come from inverse iteration on
the original matrix.  Nothing here calls an external eigensolver, so the
ground truth that every deflation claim is checked against is auditable.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, SizeCapError
from .linalg import (as_square, hermitian_part, hessenberg as _hessenberg,
                     householder_vector as _householder_vector, is_hermitian, lu_factor)

__all__ = [
    "EigenDecomposition", "DecompositionCheck", "Cluster", "eigen_oracle",
    "eigvals_oracle", "validate_decomposition", "cluster_degenerate",
    "spectrum_sort_key", "sort_spectrum", "ORACLE_CAP",
]

ORACLE_CAP = 256

#: tolerances attached to the orthonormality certificate and pair residuals
ORTHONORMAL_TOL = 1e-10
RESIDUAL_RTOL = 1e-9

_EPS = np.finfo(float).eps


def spectrum_sort_key(z, scale=1.0):
    """Order by real part, then imaginary part.

    Real parts are rounded at ``1e-10 * scale`` so that conjugate pairs
    computed with slightly different real parts still sort by imaginary part.
    """
    z = complex(z)
    q = 1e-10 * max(scale, 1e-300)
    return (round(z.real / q), z.imag, z.real)


def sort_spectrum(values):
    vals = [complex(v) for v in values]
    scale = max([abs(v) for v in vals] + [1.0])
    return sorted(vals, key=lambda z: spectrum_sort_key(z, scale))


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenpairs of a square matrix.

    ``vectors[:, k]`` is the unit eigenvector paired with ``values[k]``.
    ``orthonormal`` is a measured certificate, never assumed, and
    ``reliable`` records whether every pair passed its residual check.
    """

    values: np.ndarray
    vectors: np.ndarray
    orthonormal: bool
    source: str = "computed"
    reliable: bool = True
    max_residual: float = 0.0

    @property
    def n(self):
        return self.values.size

    def vector(self, k):
        return self.vectors[:, k].copy()

    def pairs(self):
        return [(complex(self.values[k]), self.vector(k)) for k in range(self.n)]

    @classmethod
    def from_pairs(cls, matrix, values, vectors, source="user-supplied"):
        """Build and certify a decomposition from supplied eigenpairs.

        Vectors are the columns of ``vectors``; they are scaled to unit norm
        and the certificate is measured against ``matrix``.
        """
        b = as_square(matrix)
        vals = np.array(values, dtype=np.complex128).ravel()
        vecs = np.array(vectors, dtype=np.complex128)
        if vecs.shape != (b.shape[0], vals.size):
            raise DimensionError(
                f"vectors of shape {vecs.shape} do not match {vals.size} values "
                f"of a {b.shape[0]}x{b.shape[0]} matrix")
        norms = np.linalg.norm(vecs, axis=0)
        if np.any(norms == 0):
            raise ValueError("eigenvectors must be nonzero")
        vecs = vecs / norms
        check = validate_decomposition(b, vals, vecs)
        return cls(vals, vecs, check.orthonormal, source,
                   not check.flagged, check.max_residual)

    @classmethod
    def from_diagonal(cls, diag):
        """Exact decomposition of ``diag(d)``: sorted values, permuted basis."""
        d = np.array(diag, dtype=np.complex128).ravel()
        order = sorted(range(d.size), key=lambda i: spectrum_sort_key(d[i]))
        vecs = np.zeros((d.size, d.size), dtype=np.complex128)
        for col, i in enumerate(order):
            vecs[i, col] = 1
        return cls(d[order], vecs, True, "user-supplied", True, 0.0)

    def conjugate(self):
        """Decomposition of ``B^H`` given one of a normal ``B``."""
        return EigenDecomposition(self.values.conj(), self.vectors.copy(),
                                  self.orthonormal, self.source, self.reliable,
                                  self.max_residual)


@dataclass(frozen=True)
class DecompositionCheck:
    """Residual report of a claimed eigendecomposition."""

    residuals: tuple
    max_residual: float
    gram_deviation: float
    orthonormal: bool
    flagged: tuple
    threshold: float


def validate_decomposition(m, values, vectors=None):
    """Per-pair residuals ``|m v_k - l_k v_k|`` and Gram deviation from identity.

    Accepts either an :class:`EigenDecomposition` as ``values`` or raw
    ``values, vectors``.  Pairs whose residual exceeds ``1e-9 * |m|_F`` are
    listed in ``flagged``.
    """
    if isinstance(values, EigenDecomposition):
        values, vectors = values.values, values.vectors
    b = as_square(m)
    vals = np.asarray(values, dtype=np.complex128)
    vecs = np.asarray(vectors, dtype=np.complex128)
    if vecs.shape != (b.shape[0], vals.size):
        raise DimensionError("decomposition does not match matrix dimensions")
    res = np.linalg.norm(b @ vecs - vecs * vals, axis=0)
    gram = vecs.conj().T @ vecs
    gdev = float(np.max(np.abs(gram - np.eye(vals.size)))) if vals.size else 0.0
    threshold = RESIDUAL_RTOL * float(np.linalg.norm(b))
    flagged = tuple(int(k) for k in np.flatnonzero(res > threshold))
    return DecompositionCheck(tuple(float(r) for r in res),
                              float(np.max(res)) if res.size else 0.0,
                              gdev, gdev <= ORTHONORMAL_TOL, flagged, threshold)


@dataclass(frozen=True)
class Cluster:
    """A group of numerically equal eigenvalues."""

    value: complex
    multiplicity: int
    indices: tuple


def cluster_degenerate(values, tol):
    """Transitive-closure clustering of ``values`` within ``tol``.

    Groups come back ordered by their mean value (real, then imaginary).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vals = [complex(v) for v in values]
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = [Cluster(complex(np.mean([vals[i] for i in idx])), len(idx), tuple(idx))
           for idx in groups.values()]
    scale = max([abs(v) for v in vals] + [1.0])
    return sorted(out, key=lambda c: spectrum_sort_key(c.value, scale))


# -- Hermitian path -----------------------------------------------------------

def _tridiagonalize(a):
    n = a.shape[0]
    a = a.copy()
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        v = _householder_vector(a[k + 1:, k])
        if v is None:
            continue
        a[k + 1:, :] -= 2 * np.outer(v, v.conj() @ a[k + 1:, :])
        a[:, k + 1:] -= 2 * np.outer(a[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2 * np.outer(q[:, k + 1:] @ v, v.conj())
    return a, q


def _tql_implicit(d, e, zt, max_iter):
    """Implicit-shift QL on a real symmetric tridiagonal.

    ``d`` is the diagonal, ``e[i]`` couples ``i`` and ``i+1`` (``e[-1] == 0``)
    and rows of ``zt`` accumulate the rotations.  All three are updated.
    """
    n = len(d)
    total = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                raise ConvergenceError(
                    f"QL iteration exceeded {max_iter} steps", abs(e[l]))
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = zt[i + 1].copy()
                zt[i + 1] = s * zt[i] + c * zi1
                zt[i] = c * zt[i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def _hermitian_eig(a, max_iter, vectors=True):
    n = a.shape[0]
    t, q = _tridiagonalize(a)
    d = [float(t[k, k].real) for k in range(n)]
    sub = [complex(t[k + 1, k]) for k in range(n - 1)]
    phases = np.ones(n, dtype=np.complex128)
    e = [0.0] * n
    for k, s in enumerate(sub):
        e[k] = abs(s)
        phases[k + 1] = phases[k] * (s / abs(s) if s != 0 else 1.0)
    zt = np.eye(n)
    _tql_implicit(d, e, zt, max_iter)
    vals = np.array(d, dtype=np.complex128)
    vecs = (q * phases) @ zt.T.astype(np.complex128) if vectors else None
    return vals, vecs


# -- general path -------------------------------------------------------------

def _hessenberg_qr_values(h, max_iter):
    """Eigenvalues of an upper Hessenberg matrix by single-shift complex QR."""
    n = h.shape[0]
    vals = np.zeros(n, dtype=np.complex128)
    hnorm = max(float(np.max(np.abs(h))), 1e-300)
    hi = n - 1
    since_deflation = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            vals[0] = h[0, 0]
            break
        l = hi
        while l > 0:
            s = abs(h[l - 1, l - 1]) + abs(h[l, l])
            if s == 0:
                s = hnorm
            if abs(h[l, l - 1]) <= _EPS * s:
                h[l, l - 1] = 0
                break
            l -= 1
        if l == hi:
            vals[hi] = h[hi, hi]
            hi -= 1
            since_deflation = 0
            continue
        total += 1
        since_deflation += 1
        if total > max_iter:
            raise ConvergenceError(
                f"QR iteration exceeded {max_iter} steps", abs(h[hi, hi - 1]))
        a_, b_ = h[hi - 1, hi - 1], h[hi - 1, hi]
        c_, d_ = h[hi, hi - 1], h[hi, hi]
        if since_deflation % 11 == 0:
            # exceptional shift to break cycles
            mu = d_ + 0.75 * abs(c_) * (1 + 0.5j)
        else:
            half = (a_ + d_) / 2
            disc = np.sqrt((a_ - d_) ** 2 / 4 + b_ * c_)
            mu1, mu2 = half + disc, half - disc
            mu = mu1 if abs(mu1 - d_) <= abs(mu2 - d_) else mu2
        x = h[l, l] - mu
        y = h[l + 1, l]
        for k in range(l, hi):
            r = math.hypot(abs(x), abs(y))
            if r != 0:
                c = x / r
                s = y / r
                lo_col = max(l, k - 1)
                rk = h[k, lo_col:hi + 1].copy()
                rk1 = h[k + 1, lo_col:hi + 1]
                h[k, lo_col:hi + 1] = c.conjugate() * rk + s.conjugate() * rk1
                h[k + 1, lo_col:hi + 1] = -s * rk + c * rk1
                top = min(k + 2, hi)
                ck = h[l:top + 1, k].copy()
                ck1 = h[l:top + 1, k + 1]
                h[l:top + 1, k] = c * ck + s * ck1
                h[l:top + 1, k + 1] = -s.conjugate() * ck + c.conjugate() * ck1
            if k < hi - 1:
                x = h[k + 1, k]
                y = h[k + 2, k]
    return vals


def _inverse_iteration(a, vals, cluster_tol):
    """Unit eigenvectors by inverse iteration with in-cluster orthogonalization."""
    n = a.shape[0]
    scale = max(float(np.max(np.abs(a))), 1e-300)
    floor = _EPS * scale
    rng = np.random.default_rng(20240917)
    vecs = np.zeros((n, n), dtype=np.complex128)
    eye = np.eye(n)
    for k in range(n):
        lam = vals[k]
        mates = [j for j in range(k) if abs(vals[j] - lam) <= cluster_tol]
        lu, piv, sgn = lu_factor(a - (lam + floor) * eye)
        diag = np.diag(lu)
        small = np.abs(diag) < floor
        lu[small, small] = floor
        x = rng.normal(size=n) + 1j * rng.normal(size=n)
        for _ in range(3):
            for j in mates:
                x -= np.vdot(vecs[:, j], x) * vecs[:, j]
            x = _lu_solve_unchecked(lu, piv, x)
            for j in mates:
                x -= np.vdot(vecs[:, j], x) * vecs[:, j]
            nx = np.linalg.norm(x)
            if nx == 0 or not np.isfinite(nx):
                break
            x = x / nx
        vecs[:, k] = x
    return vecs


def _lu_solve_unchecked(lu, piv, b):
    x = b.copy()
    n = lu.shape[0]
    for k in range(n):
        p = piv[k]
        if p != k:
            x[k], x[p] = x[p], x[k]
    for k in range(n):
        x[k + 1:] -= lu[k + 1:, k] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] /= lu[k, k]
        x[:k] -= lu[:k, k] * x[k]
    return x


def _normalize_phase(vecs):
    """Make the first entry of largest modulus in each column real positive."""
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mags = np.abs(col)
        top = mags.max()
        if top == 0:
            continue
        i = int(np.flatnonzero(mags >= (1 - 1e-8) * top)[0])
        out[:, k] = col * (abs(col[i]) / col[i])
    return out


def _oracle_values(a, max_iter):
    n = a.shape[0]
    if is_hermitian(a, rtol=1e-13):
        vals, _ = _hermitian_eig(hermitian_part(a), max_iter, vectors=False)
        return vals, True
    return _hessenberg_qr_values(_hessenberg(a), max_iter), False


def eigvals_oracle(m, max_iter=None):
    """Sorted eigenvalues only (skips eigenvector work)."""
    a = as_square(m)
    n = a.shape[0]
    if n > ORACLE_CAP:
        raise SizeCapError(f"eigen_oracle is capped at n={ORACLE_CAP}, got {n}")
    vals, _ = _oracle_values(a, max_iter or 100 * n)
    return np.array(sort_spectrum(vals), dtype=np.complex128)


def eigen_oracle(m, max_iter=None):
    """Full eigendecomposition of a square matrix.

    ``max_iter`` bounds the total number of QL/QR sweeps (default ``100 n``);
    exceeding it raises :class:`ConvergenceError`.  Eigenvalues are sorted by
    real part, then imaginary part.  For non-normal input the vectors are
    generally not orthonormal and, for defective input, may fail their
    residual check; both facts are recorded on the result rather than raised.
    """
    a = as_square(m)
    n = a.shape[0]
    if n > ORACLE_CAP:
        raise SizeCapError(f"eigen_oracle is capped at n={ORACLE_CAP}, got {n}")
    max_iter = max_iter or 100 * n
    if is_hermitian(a, rtol=1e-13):
        vals, vecs = _hermitian_eig(hermitian_part(a), max_iter)
    else:
        vals = _hessenberg_qr_values(_hessenberg(a), max_iter)
        scale = max(float(np.max(np.abs(a))), 1.0)
        order = sorted(range(n), key=lambda i: spectrum_sort_key(vals[i], scale))
        vals = vals[order]
        vecs = _inverse_iteration(a, vals, 1e-8 * scale)
    scale = max([abs(v) for v in vals] + [1.0])
    order = sorted(range(n), key=lambda i: spectrum_sort_key(vals[i], scale))
    vals, vecs = vals[order], _normalize_phase(vecs[:, order])
    check = validate_decomposition(a, vals, vecs)
    return EigenDecomposition(vals, vecs, check.orthonormal, "computed",
                              not check.flagged, check.max_residual)
