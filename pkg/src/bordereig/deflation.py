"""Deflating the eigenproblem of a bordered matrix with known eigenpairs.

A matrix ``A`` of order ``M = N + L`` is split as::

    A = [[B,    C],
         [R,    D]]

with ``B`` the leading ``N x N`` block whose eigenpairs ``(l_k, v_k)`` are
known, ``C`` the ``N x L`` border columns, ``R`` the ``L x N`` border rows and
``D`` the ``L x L`` corner.  Expanding each border column in the eigenbasis
of ``B``, ``c_l = sum_k alpha[l, k] v_k``, every eigenvalue ``l_k`` whose
coefficients vanish in all columns is also an eigenvalue of ``A``; a
degenerate eigenvalue of multiplicity ``m`` survives with multiplicity at
least ``m - L`` whatever the border.  Each such shared eigenvalue removes one
degree from the characteristic polynomial that still has to be solved.
"""

from dataclasses import dataclass, field

import numpy as np

from .eigen import (EigenDecomposition, cluster_degenerate, eigen_oracle,
                    sort_spectrum, validate_decomposition)
from .errors import (DimensionError, InvalidDecompositionError, LiftError,
                     NonOrthonormalBasisError, ZeroCouplingError)
from .linalg import as_square, as_vector, is_hermitian, permute_symmetric
from .polyroots import Polynomial, char_poly, deflate_known_root, roots

__all__ = [
    "BorderedView", "BorderCoefficients", "SharedEigenvalue", "EigenPair",
    "DeflationReport", "partition", "decompose_border", "detect_shared",
    "detg_value", "detg_polynomial", "reduced_polynomial_single", "deflate",
    "compute_mu", "lift_eigenvector", "almost_hermitian_factors",
    "VANISHING", "SURPLUS", "DEFAULT_TOL",
]

VANISHING = "vanishing-coefficient"
SURPLUS = "degeneracy-surplus"

#: coefficients with |alpha| <= DEFAULT_TOL * |nu| count as exact zeros
DEFAULT_TOL = 1e-10
#: relative residual allowed on a lifted eigenvector
LIFT_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class BorderedView:
    """Block partition of a (possibly permuted) matrix ``A``.

    ``border_cols[:, l]`` is the column ``nu_l`` and ``border_rows[l]`` the
    matching row; ``partition_origin`` is the symmetric permutation applied
    to the input before splitting.
    """

    B: np.ndarray
    border_cols: np.ndarray
    border_rows: np.ndarray
    corner: np.ndarray
    partition_origin: tuple = ()

    def __post_init__(self):
        n, l = self.border_cols.shape
        if (self.B.shape != (n, n) or self.border_rows.shape != (l, n)
                or self.corner.shape != (l, l) or n < 1 or l < 1):
            raise DimensionError("inconsistent block shapes in bordered view")
        if not self.partition_origin:
            object.__setattr__(self, "partition_origin", tuple(range(n + l)))

    @property
    def n(self):
        return self.B.shape[0]

    @property
    def n_border(self):
        return self.border_cols.shape[1]

    @property
    def m(self):
        return self.n + self.n_border

    def assemble(self):
        return np.block([[self.B, self.border_cols], [self.border_rows, self.corner]])

    def nu(self, l=0):
        return self.border_cols[:, l].copy()

    def conjugate_transpose(self):
        """View of ``A^H`` with the same split."""
        return BorderedView(self.B.conj().T, self.border_rows.conj().T,
                            self.border_cols.conj().T, self.corner.conj().T,
                            self.partition_origin)

    def is_hermitian(self):
        return is_hermitian(self.assemble(), rtol=1e-13)


def partition(a, n, perm=None):
    """Split ``a`` (after an optional symmetric permutation) at order ``n``."""
    a = as_square(a)
    if perm is not None:
        a = permute_symmetric(a, perm)
        origin = tuple(int(i) for i in perm)
    else:
        origin = tuple(range(a.shape[0]))
    if not 1 <= n < a.shape[0]:
        raise DimensionError(f"split {n} out of range 1..{a.shape[0] - 1}")
    return BorderedView(a[:n, :n].copy(), a[:n, n:].copy(), a[n:, :n].copy(),
                        a[n:, n:].copy(), origin)


@dataclass(frozen=True, eq=False)
class BorderCoefficients:
    """Border columns expanded in the eigenbasis of ``B``.

    ``alpha[l, k] = v_k^H nu_l``; ``reconstruction_residual[l]`` is
    ``|nu_l - sum_k alpha[l, k] v_k|``.
    """

    alpha: np.ndarray
    reconstruction_residual: np.ndarray
    nu_norms: np.ndarray

    @property
    def n_border(self):
        return self.alpha.shape[0]

    def relative(self):
        """``|alpha[l, k]| / |nu_l|`` (zero rows stay zero)."""
        safe = np.where(self.nu_norms > 0, self.nu_norms, 1.0)
        return np.abs(self.alpha) / safe[:, None]


def _require_orthonormal(eig):
    if not eig.orthonormal:
        raise NonOrthonormalBasisError(
            "border decomposition needs an orthonormal eigenbasis of B")


def decompose_border(nu, eig):
    """Coefficients of one border column (1-D) or several (``N x L``)."""
    _require_orthonormal(eig)
    cols = np.array(nu, dtype=np.complex128)
    if cols.ndim == 1:
        cols = cols[:, None]
    if cols.ndim != 2 or cols.shape[0] != eig.n:
        raise DimensionError(
            f"border of dim {cols.shape[0]} does not match basis of dim {eig.n}")
    v = eig.vectors
    alpha = (v.conj().T @ cols).T
    recon = cols - v @ alpha.T
    return BorderCoefficients(alpha, np.linalg.norm(recon, axis=0),
                              np.linalg.norm(cols, axis=0))


@dataclass(frozen=True)
class SharedEigenvalue:
    """An eigenvalue of ``B`` proven to be an eigenvalue of ``A``."""

    value: complex
    multiplicity: int
    provenance: str
    indices: tuple = ()


def _default_cluster_tol(eig):
    scale = max([abs(complex(v)) for v in eig.values] + [1.0])
    return 1e-8 * scale


def _numerical_rank(mat, tol):
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(sv > tol))


def detect_shared(coeffs, eig, tol=DEFAULT_TOL, cluster_tol=None):
    """Eigenvalues of ``B`` that are provably eigenvalues of ``A``.

    For each cluster of equal eigenvalues (multiplicity ``m``) the border
    coefficients restricted to the cluster form an ``L x m`` block; its
    numerical rank ``r`` (singular values above ``tol`` after scaling each
    row by ``|nu_l|``) leaves ``m - r`` shared copies.  With ``r == 0`` every
    copy is credited to vanishing coefficients.  Otherwise ``max(m - L, 0)``
    copies are the degeneracy surplus and the rest are credited to
    coefficients that vanish inside the eigenspace.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(coeffs, (list, tuple)):
        coeffs = BorderCoefficients(
            np.vstack([c.alpha for c in coeffs]),
            np.concatenate([c.reconstruction_residual for c in coeffs]),
            np.concatenate([c.nu_norms for c in coeffs]))
    n_border = coeffs.n_border
    scaled = coeffs.alpha / np.where(coeffs.nu_norms > 0, coeffs.nu_norms, 1.0)[:, None]
    shared = []
    for cl in cluster_degenerate(eig.values, cluster_tol or _default_cluster_tol(eig)):
        block = scaled[:, list(cl.indices)]
        rank = _numerical_rank(block, tol)
        count = cl.multiplicity - rank
        if count <= 0:
            continue
        if rank == 0:
            shared.append(SharedEigenvalue(cl.value, count, VANISHING, cl.indices))
            continue
        surplus = max(cl.multiplicity - n_border, 0)
        if surplus:
            shared.append(SharedEigenvalue(cl.value, surplus, SURPLUS, cl.indices))
        if count - surplus:
            shared.append(SharedEigenvalue(cl.value, count - surplus, VANISHING, cl.indices))
    return shared


def _detect_surplus_only(eig, n_border, cluster_tol):
    out = []
    for cl in cluster_degenerate(eig.values, cluster_tol or _default_cluster_tol(eig)):
        if cl.multiplicity > n_border:
            out.append(SharedEigenvalue(cl.value, cl.multiplicity - n_border,
                                        SURPLUS, cl.indices))
    return out


def _row_projections(view, eig):
    """``s[k] = r . v_k`` for the single border row."""
    return view.border_rows[0] @ eig.vectors


def _couplings(view, eig, coeffs, hermitian):
    """Products ``alpha_k * (r . v_k)``, or ``|alpha_k|^2`` for Hermitian ``A``."""
    alpha = coeffs.alpha[0]
    if hermitian:
        return np.abs(alpha) ** 2
    return alpha * _row_projections(view, eig)


def _single_border_args(view, eig, coeffs, hermitian):
    if view.n_border != 1:
        raise DimensionError("the summation identity needs a single border")
    _require_orthonormal(eig)
    if coeffs is None:
        coeffs = decompose_border(view.border_cols, eig)
    if hermitian is None:
        hermitian = view.is_hermitian()
    return coeffs, _couplings(view, eig, coeffs, hermitian)


def detg_value(view, eig, lam, coeffs=None, hermitian=None):
    """Evaluate the eigenbasis expansion of ``det(A - lam I)`` for one border.

    ``sum_k [(d - lam)(l_k - lam)/N - alpha_k (r . v_k)] prod_{j != k}(l_j - lam)``
    with ``|alpha_k|^2`` in place of the product for Hermitian ``A``.
    """
    coeffs, sigma = _single_border_args(view, eig, coeffs, hermitian)
    lam = complex(lam)
    d = complex(view.corner[0, 0])
    n = view.n
    diffs = eig.values - lam
    total = 0j
    for k in range(n):
        others = np.prod(np.delete(diffs, k))
        total += ((d - lam) * diffs[k] / n - sigma[k]) * others
    return complex(total)


def detg_polynomial(view, eig, coeffs=None, hermitian=None):
    """The same expansion as :func:`detg_value`, in coefficient form."""
    coeffs, sigma = _single_border_args(view, eig, coeffs, hermitian)
    d = complex(view.corner[0, 0])
    n = view.n
    corner_term = Polynomial([d, -1])
    total = Polynomial([0])
    for k in range(n):
        others = Polynomial.from_roots(np.delete(eig.values, k), leading=(-1) ** (n - 1))
        bracket = corner_term * Polynomial([eig.values[k] / n, -1 / n]) - Polynomial([sigma[k]])
        total = total + bracket * others
    return total


def reduced_polynomial_single(view, eig, coeffs=None, tol=DEFAULT_TOL,
                              cluster_tol=None, hermitian=None):
    """Factor of ``det(A - x I)`` left after removing the shared eigenvalues.

    Single border only.  Equal eigenvalues are merged (their couplings add
    up), and clusters whose coefficients all vanish drop out entirely, so the
    result is::

        (d - x) prod_c (l_c - x) - sum_c s_c prod_{c' != c} (l_c' - x)

    over the surviving clusters ``c`` with summed couplings ``s_c``.
    """
    coeffs, sigma = _single_border_args(view, eig, coeffs, hermitian)
    d = complex(view.corner[0, 0])
    rel = coeffs.relative()[0]
    live = []
    for cl in cluster_degenerate(eig.values, cluster_tol or _default_cluster_tol(eig)):
        idx = list(cl.indices)
        if np.all(rel[idx] <= tol):
            continue
        live.append((cl.value, complex(np.sum(sigma[idx]))))
    lams = [v for v, _ in live]
    result = Polynomial([d, -1]) * Polynomial.from_roots(lams, leading=(-1) ** len(lams))
    for i, (_, s) in enumerate(live):
        rest = lams[:i] + lams[i + 1:]
        result = result - Polynomial.from_roots(rest, leading=(-1) ** len(rest)) * s
    return result


def compute_mu(lam, lambda_k, alpha):
    """Border coordinate ``(lam - lambda_k) / alpha`` of ``(v_k, mu)``."""
    alpha = complex(alpha)
    if abs(alpha) <= 1e-14:
        raise ZeroCouplingError("alpha vanishes; the eigenvector is a lifted one with mu = 0")
    return (complex(lam) - complex(lambda_k)) / alpha


def almost_hermitian_factors(view, rtol=1e-10):
    """Per-border ``beta_l`` with ``R[l] = beta_l * conj(nu_l)``, or None.

    Each ``beta_l`` is the least-squares fit; the view qualifies when every
    fitted row matches to ``rtol`` times the largest border entry.
    """
    cols, rows = view.border_cols, view.border_rows
    scale = max(float(np.max(np.abs(cols))), float(np.max(np.abs(rows))), 1e-300)
    betas = []
    for l in range(view.n_border):
        nu, r = cols[:, l], rows[l]
        nn = float(np.vdot(nu, nu).real)
        beta = complex(np.sum(nu * r) / nn) if nn > 0 else 1.0 + 0j
        if np.max(np.abs(r - beta * nu.conj())) > rtol * scale:
            return None
        betas.append(beta)
    return tuple(betas)


def _pair_residual(a, lam, v):
    return float(np.linalg.norm(a @ v - lam * v))


def _null_vectors(a, lam, count):
    """``count`` right singular vectors of ``A - lam I`` with smallest singular values."""
    _, _, vh = np.linalg.svd(a - lam * np.eye(a.shape[0]))
    return [vh[-1 - i].conj() for i in range(count)]


def _smallest_singular(a, lam):
    return float(np.linalg.svd(a - lam * np.eye(a.shape[0]), compute_uv=False)[-1])


def lift_eigenvector(upsilon, view, lam, rtol=LIFT_RTOL):
    """Extend an eigenvector of ``B`` to one of ``A``.

    The zero-padded vector ``(v, 0, ..., 0)`` is tried first; it is exact
    whenever the border rows annihilate ``v`` (Hermitian and almost-Hermitian
    borders with a vanishing coefficient).  For any other matrix the linear
    system ``(A - lam I) x = 0`` is solved instead.  The result must pass
    ``|A x - lam x| <= rtol * |A|_F`` or :class:`LiftError` is raised.
    """
    v = as_vector(upsilon)
    if v.size != view.n:
        raise DimensionError(f"vector of dim {v.size} does not match B of order {view.n}")
    a = view.assemble()
    lam = complex(lam)
    bound = rtol * float(np.linalg.norm(a))
    padded = np.concatenate([v, np.zeros(view.n_border, dtype=np.complex128)])
    res = _pair_residual(a, lam, padded)
    if res <= bound:
        return padded
    if view.is_hermitian() or almost_hermitian_factors(view) is not None:
        raise LiftError(
            f"zero-padded vector has residual {res:.3g} > {bound:.3g}; "
            "the border constraint is not satisfied")
    x = _null_vectors(a, lam, 1)[0]
    x = x * (np.linalg.norm(v) / np.linalg.norm(x))
    res = _pair_residual(a, lam, x)
    if res > bound:
        raise LiftError(f"{lam} is not an eigenvalue of A (residual {res:.3g})")
    return x


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: complex
    vector: np.ndarray
    residual: float
    origin: str = ""


@dataclass(frozen=True, eq=False)
class DeflationReport:
    """Everything :func:`deflate` established about ``A``.

    ``shared`` and ``residual_roots`` together list the whole spectrum;
    ``root_residuals[i]`` is the smallest singular value of
    ``A - residual_roots[i] I``.
    """

    shared: tuple
    residual_poly: Polynomial
    residual_roots: tuple
    root_residuals: tuple
    lifted: tuple
    new_pairs: tuple
    spectrum_residual: float
    coefficients: BorderCoefficients = None
    path: str = "column"
    approximate: bool = False
    hermitian: bool = False
    almost_hermitian: tuple = None
    view: BorderedView = field(default=None, repr=False)
    eig: EigenDecomposition = field(default=None, repr=False)

    @property
    def shared_count(self):
        return sum(s.multiplicity for s in self.shared)

    def count(self, provenance):
        return sum(s.multiplicity for s in self.shared if s.provenance == provenance)

    def shared_values(self):
        """Shared eigenvalues repeated by multiplicity."""
        return [s.value for s in self.shared for _ in range(s.multiplicity)]

    def spectrum(self):
        return sort_spectrum(self.shared_values() + list(self.residual_roots))


def _check_eig(view, eig):
    if eig is None:
        return eigen_oracle(view.B)
    if eig.n != view.n:
        raise DimensionError("decomposition order does not match B")
    check = validate_decomposition(view.B, eig)
    if check.flagged:
        raise InvalidDecompositionError(
            f"pairs {list(check.flagged)} of the decomposition fail their residual check "
            f"(max {check.max_residual:.3g})")
    return eig


def _residual_by_division(a, shared, force):
    p = char_poly(a)
    for s in shared:
        for _ in range(s.multiplicity):
            p = deflate_known_root(p, s.value, force=force)
    return p


def _lift_shared(view, eig, shared, a):
    """Eigenvectors of ``A`` for every shared eigenvalue."""
    out = []
    by_cluster = {}
    for s in shared:
        key = s.indices
        by_cluster.setdefault(key, [s.value, 0])[1] += s.multiplicity
    for idx, (value, count) in by_cluster.items():
        u = eig.vectors[:, list(idx)]
        proj = view.border_rows @ u
        _, sv, vh = np.linalg.svd(proj)
        tol = 1e-10 * max(float(np.max(np.abs(view.border_rows))), 1e-300)
        rank = int(np.sum(sv > tol))
        null = vh[rank:].conj().T
        if null.shape[1] >= count:
            vecs = [np.concatenate([u @ null[:, i], np.zeros(view.n_border)])
                    for i in range(count)]
            origin = "zero-padded"
        else:
            vecs = _null_vectors(a, value, count)
            origin = "linear-system"
        for v in vecs:
            out.append(EigenPair(value, v, _pair_residual(a, value, v), origin))
    return out


def _analytic_new_pairs(view, eig, coeffs, rts, tol, a):
    """``(v_k, mu)`` eigenvectors when a single coefficient survives."""
    if view.n_border != 1 or coeffs is None:
        return []
    rel = coeffs.relative()[0]
    live = np.flatnonzero(rel > tol)
    if live.size != 1:
        return []
    k = int(live[0])
    alpha = coeffs.alpha[0, k]
    if abs(alpha) <= 1e-14:
        return []
    out = []
    for lam in rts:
        mu = compute_mu(lam, eig.values[k], alpha)
        v = np.concatenate([eig.vectors[:, k], [mu]])
        v = v / np.linalg.norm(v)
        out.append(EigenPair(complex(lam), v, _pair_residual(a, lam, v), "border-coordinate"))
    return out


def _column_analysis(view, eig, tol, cluster_tol, force):
    """Shared eigenvalues and residual polynomial from the column side."""
    a = view.assemble()
    if not eig.orthonormal:
        shared = _detect_surplus_only(eig, view.n_border, cluster_tol)
        return shared, _residual_by_division(a, shared, force), None
    coeffs = decompose_border(view.border_cols, eig)
    shared = detect_shared(coeffs, eig, tol, cluster_tol)
    if not np.any(view.border_cols):
        # A is block upper triangular: det(A - x I) = det(B - x I) det(D - x I)
        residual = char_poly(view.corner)
    elif view.n_border == 1:
        residual = reduced_polynomial_single(view, eig, coeffs, tol, cluster_tol)
    else:
        residual = _residual_by_division(a, shared, force)
    return shared, residual, coeffs


def deflate(view, eig=None, tol=DEFAULT_TOL, soft_tol=None, transpose_fallback=True,
            cluster_tol=None):
    """Split the spectrum of ``A`` into shared eigenvalues and a residual polynomial.

    ``eig`` describes ``view.B``; when omitted it is computed with the
    reference solver.  ``soft_tol`` (larger than ``tol``) treats small but
    nonzero coefficients as vanishing; the report is then marked approximate
    and its residuals show how far from exact the result is.  When no
    coefficient vanishes column-wise and the eigenbasis is orthonormal, the
    same analysis is run on ``A^H`` and, if it finds constraints there, its
    conjugated result is reported with ``path == "row"``.
    """
    eig = _check_eig(view, eig)
    approximate = soft_tol is not None and soft_tol > tol
    t = soft_tol if approximate else tol
    a = view.assemble()
    path = "column" if eig.orthonormal else "degeneracy-only"
    shared, residual, coeffs = _column_analysis(view, eig, t, cluster_tol, approximate)
    if (transpose_fallback and eig.orthonormal
            and not any(s.provenance == VANISHING for s in shared)
            and not view.is_hermitian()):
        tview = view.conjugate_transpose()
        t_shared, t_residual, _ = _column_analysis(tview, eig.conjugate(), t,
                                                   cluster_tol, approximate)
        if any(s.provenance == VANISHING for s in t_shared):
            shared = [SharedEigenvalue(s.value.conjugate(), s.multiplicity,
                                       s.provenance, s.indices) for s in t_shared]
            residual = t_residual.conj()
            path = "row"
    rts = tuple(sort_spectrum(roots(residual)))
    if sum(s.multiplicity for s in shared) + residual.degree != view.m:
        raise ArithmeticError("shared count and residual degree do not add up to M")
    lifted = tuple(_lift_shared(view, eig, shared, a)) if shared else ()
    new_pairs = tuple(_analytic_new_pairs(view, eig, coeffs, rts, t, a)) if path == "column" else ()
    root_res = tuple(_smallest_singular(a, r) for r in rts)
    residuals = [p.residual for p in lifted + new_pairs] + list(root_res)
    return DeflationReport(
        shared=tuple(shared), residual_poly=residual, residual_roots=rts,
        root_residuals=root_res, lifted=lifted, new_pairs=new_pairs,
        spectrum_residual=max(residuals) if residuals else 0.0,
        coefficients=coeffs, path=path, approximate=approximate,
        hermitian=view.is_hermitian(), almost_hermitian=almost_hermitian_factors(view),
        view=view, eig=eig)
