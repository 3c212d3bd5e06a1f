"""Growing matrices whose spectra are known in closed form.

Two constructions are provided.  :func:`extend_preserving` appends ``L``
rows and columns built from one eigenvector ``v_k`` of ``B`` so that every
other eigenvector of ``B``, padded with zeros, stays an eigenvector of the
result.  :func:`grow_analytic` repeatedly appends a Hermitian border that
couples at most three current eigenvectors, so each step only has to solve
a quartic and the full spectrum is tracked without an eigensolver.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import spectrum_sort_key
from .errors import GrowthError, NonOrthonormalBasisError, NotHermitianError
from .linalg import as_square, hermitian_part, is_hermitian
from .polyroots import Polynomial, roots_closed_form

__all__ = [
    "GrowthStep", "GrowthTrace", "extend_preserving", "grow_analytic",
    "arrowhead_polynomial", "arrowhead_quartic", "arrowhead_matrix",
    "largest_real_part", "MAX_COUPLED",
]

#: a growth step may couple at most this many eigenvectors (quartic limit)
MAX_COUPLED = 3


@dataclass(frozen=True)
class GrowthStep:
    """One appended row/column and the eigenvalues it produced.

    ``indices`` are 0-based positions in the spectrum current at this step
    (sorted by real part, then imaginary part).
    """

    indices: tuple
    alphas: tuple
    betas: tuple
    corner: complex
    roots: tuple
    chosen: complex = None
    residual: float = 0.0
    carried: tuple = ()


@dataclass(frozen=True, eq=False)
class GrowthTrace:
    """Certificate of a construction: every step, the result and its spectrum."""

    steps: tuple
    final_matrix: np.ndarray
    analytic_spectrum: tuple
    vectors: np.ndarray = field(default=None, repr=False)
    seed_order: int = 0

    @property
    def order(self):
        return self.final_matrix.shape[0]

    @property
    def max_residual(self):
        return max((s.residual for s in self.steps), default=0.0)


def largest_real_part(candidates):
    """Default root selector: largest real part, ties to larger imaginary part."""
    return max(candidates, key=lambda z: (z.real, z.imag))


def _quadratic_roots(b, c):
    """Roots of ``x^2 + b x + c``."""
    return roots_closed_form(Polynomial([c, b, 1]))


def extend_preserving(b, eig, k, alphas, betas, corners, select=largest_real_part):
    """Border ``b`` with ``L`` columns built on eigenvector ``k``.

    Column ``N + l`` carries ``alpha_l * w_{l-1}`` and row ``N + l`` carries
    ``beta_l * w_{l-1}^H`` where ``w_0 = v_k`` and ``w_l = (w_{l-1}, mu_l)``
    is the eigenvector of the order ``N + l`` matrix for the selected root
    ``Lambda_l`` of::

        (x - corner_l)(x - Lambda_{l-1}) - alpha_l beta_l |w_{l-1}|^2 = 0

    with ``Lambda_0 = lambda_k`` and ``mu_l = (Lambda_l - Lambda_{l-1}) / alpha_l``.
    The spectrum of the result is ``{lambda_j, j != k}``, the unselected root
    of every step and the last selected root.  Choosing ``beta_l =
    conj(alpha_l)`` with real corners gives a Hermitian matrix.
    """
    base = as_square(b)
    if not eig.orthonormal:
        raise NonOrthonormalBasisError("preservation needs an orthonormal eigenbasis")
    n = base.shape[0]
    if eig.n != n:
        raise GrowthError("decomposition order does not match the matrix")
    if not 0 <= k < n:
        raise GrowthError(f"eigenvector index {k} out of range 0..{n - 1}")
    alphas = [complex(a) for a in alphas]
    betas = [complex(x) for x in betas]
    corners = [complex(c) for c in corners]
    n_ext = len(alphas)
    if n_ext < 1 or len(betas) != n_ext or len(corners) != n_ext:
        raise GrowthError("alphas, betas and corners need the same nonzero length")
    if any(abs(a) <= 1e-14 for a in alphas):
        raise GrowthError("every alpha must be nonzero")

    size = n + n_ext
    out = np.zeros((size, size), dtype=np.complex128)
    out[:n, :n] = base
    w = eig.vector(k)
    lam_prev = complex(eig.values[k])
    steps = []
    others = []
    for ell in range(n_ext):
        pos = n + ell
        alpha, beta, corner = alphas[ell], betas[ell], corners[ell]
        out[:pos, pos] = alpha * w
        out[pos, :pos] = beta * w.conj()
        out[pos, pos] = corner
        coupling = alpha * beta * float(np.vdot(w, w).real)
        rts = _quadratic_roots(-(corner + lam_prev), corner * lam_prev - coupling)
        chosen = complex(select(rts))
        other = rts[1] if rts[0] == chosen else rts[0]
        block = out[:pos + 1, :pos + 1]
        res = 0.0
        for lam in rts:
            v = np.concatenate([w, [(lam - lam_prev) / alpha]])
            v /= np.linalg.norm(v)
            res = max(res, float(np.linalg.norm(block @ v - lam * v)))
        steps.append(GrowthStep((k,), (alpha,), (beta,), corner, tuple(rts), chosen, res))
        others.append(other)
        w = np.concatenate([w, [(chosen - lam_prev) / alpha]])
        lam_prev = chosen

    kept = [complex(v) for j, v in enumerate(eig.values) if j != k]
    spectrum = kept + others + [lam_prev]
    scale = max([abs(z) for z in spectrum] + [1.0])
    spectrum = tuple(sorted(spectrum, key=lambda z: spectrum_sort_key(z, scale)))
    return out, GrowthTrace(tuple(steps), out, spectrum, None, n)


def arrowhead_polynomial(lambdas, alphas, corner):
    """``(c - x) prod(l_i - x) - sum_i |a_i|^2 prod_{j != i}(l_j - x)``.

    This is ``det(H - x I)`` for the Hermitian arrowhead ``H`` with diagonal
    ``lambdas``, last column ``|alphas|`` and corner ``c``.
    """
    lams = [complex(v) for v in lambdas]
    weights = [abs(complex(a)) ** 2 for a in alphas]
    if len(lams) != len(weights):
        raise ValueError("lambdas and alphas need the same length")
    n = len(lams)
    p = Polynomial([complex(corner), -1]) * Polynomial.from_roots(lams, (-1) ** n)
    for i, wt in enumerate(weights):
        rest = lams[:i] + lams[i + 1:]
        p = p - Polynomial.from_roots(rest, (-1) ** len(rest)) * wt
    return p


def arrowhead_quartic(lambdas, alphas, corner):
    """The degree-4 case of :func:`arrowhead_polynomial` (three couplings)."""
    if len(lambdas) != 3 or len(alphas) != 3:
        raise ValueError("the quartic couples exactly three eigenvalues")
    return arrowhead_polynomial(lambdas, alphas, corner)


def arrowhead_matrix(lambdas, alphas, corner):
    n = len(lambdas)
    h = np.zeros((n + 1, n + 1), dtype=np.complex128)
    h[np.arange(n), np.arange(n)] = lambdas
    h[:n, n] = np.abs(np.asarray(alphas, dtype=np.complex128))
    h[n, :n] = h[:n, n]
    h[n, n] = corner
    return h


def _check_step(indices, alphas, corner, size):
    idx = [int(i) for i in indices]
    if not 1 <= len(idx) <= MAX_COUPLED:
        raise GrowthError(
            f"a step couples 1..{MAX_COUPLED} eigenvectors, got {len(idx)}")
    if len(set(idx)) != len(idx):
        raise GrowthError(f"duplicate indices in {idx}")
    if any(not 0 <= i < size for i in idx):
        raise GrowthError(f"indices {idx} out of range 0..{size - 1}")
    al = [complex(a) for a in alphas]
    if len(al) != len(idx):
        raise GrowthError("one alpha per index is required")
    if any(abs(a) <= 1e-14 for a in al):
        raise GrowthError("zero alpha makes the growth step degenerate")
    c = complex(corner)
    if c.imag != 0:
        raise NotHermitianError("the corner entry must be real")
    return idx, al, c.real


def _secular_polish(lams, weights, corner, x, steps=4):
    """Newton on ``x - c + sum w_i / (l_i - x)``; kept only while it improves."""

    def f(t):
        return t - corner + sum(w / (l - t) for l, w in zip(lams, weights))

    def df(t):
        return 1 + sum(w / (l - t) ** 2 for l, w in zip(lams, weights))

    best, fb = x, abs(f(x))
    for _ in range(steps):
        if fb == 0:
            break
        cand = best - f(best) / df(best)
        fc = abs(f(cand))
        if not fc < fb:
            break
        best, fb = cand, fc
    return best


def grow_analytic(b, eig, steps):
    """Grow a Hermitian matrix one bordered step at a time.

    Each step ``(indices, alphas, corner)`` appends the column
    ``sum_j alphas[j] * v_j`` over the chosen current eigenvectors, its
    conjugate transpose as the new row and the real ``corner``.  Untouched
    eigenpairs carry over (padded with a zero); the coupled eigenvalues are
    replaced by the roots of :func:`arrowhead_polynomial`, solved in closed
    form, whose eigenvectors follow from the arrowhead structure.  The
    spectrum is relabelled in sorted order after every step, and indices of
    the next step refer to that order.
    """
    mat = as_square(b)
    if not is_hermitian(mat, rtol=1e-12):
        raise NotHermitianError("grow_analytic needs a Hermitian seed")
    if not eig.orthonormal or eig.n != mat.shape[0]:
        raise NonOrthonormalBasisError("the seed needs an orthonormal eigenbasis")
    mat = hermitian_part(mat)
    vals = np.real(np.asarray(eig.values)).astype(float)
    vecs = np.array(eig.vectors, dtype=np.complex128)
    record = []
    for raw in steps:
        indices, alphas, corner = raw
        size = mat.shape[0]
        idx, al, corner = _check_step(indices, alphas, corner, size)
        col = vecs[:, idx] @ np.array(al)
        grown = np.zeros((size + 1, size + 1), dtype=np.complex128)
        grown[:size, :size] = mat
        grown[:size, size] = col
        grown[size, :size] = col.conj()
        grown[size, size] = corner

        scale = max(float(np.max(np.abs(vals))), 1.0)
        groups = []
        for j, a in zip(idx, al):
            for g in groups:
                if abs(vals[g["members"][0]] - vals[j]) <= 1e-12 * scale:
                    g["members"].append(j)
                    g["coeffs"].append(a)
                    break
            else:
                groups.append({"members": [j], "coeffs": [a]})

        new_vals, new_vecs = [], []
        g_lams, g_weights, g_dirs = [], [], []
        for g in groups:
            u = vecs[:, g["members"]]
            c = np.array(g["coeffs"])
            weight = float(np.sum(np.abs(c) ** 2))
            direction = u @ c / math.sqrt(weight)
            g_lams.append(float(vals[g["members"][0]]))
            g_weights.append(weight)
            g_dirs.append(direction)
            if len(g["members"]) > 1:
                # orthonormal complement of the coupled direction inside the eigenspace
                basis = np.column_stack([direction, u])
                q, _ = np.linalg.qr(basis)
                for i in range(1, len(g["members"])):
                    new_vals.append(g_lams[-1])
                    new_vecs.append(np.concatenate([q[:, i], [0]]))

        poly = arrowhead_polynomial(g_lams, np.sqrt(g_weights), corner)
        rts = []
        for r in roots_closed_form(poly):
            x = _secular_polish(g_lams, g_weights, corner, float(r.real))
            rts.append(x)
            y = sum(math.sqrt(wt) / (x - lam) * d
                    for lam, wt, d in zip(g_lams, g_weights, g_dirs))
            v = np.concatenate([y, [1.0]])
            new_vals.append(x)
            new_vecs.append(v / np.linalg.norm(v))

        res = max(float(np.linalg.norm(grown @ v - lam * v))
                  for lam, v in zip(new_vals, new_vecs))
        touched = set(idx)
        keep = [j for j in range(size) if j not in touched]
        all_vals = [float(vals[j]) for j in keep] + new_vals
        all_vecs = [np.concatenate([vecs[:, j], [0]]) for j in keep] + new_vecs
        carried = tuple(complex(vals[j]) for j in keep)
        order = sorted(range(len(all_vals)), key=lambda i: (all_vals[i], i))
        vals = np.array([all_vals[i] for i in order])
        vecs = np.column_stack([all_vecs[i] for i in order])
        mat = grown
        record.append(GrowthStep(tuple(idx), tuple(al), tuple(a.conjugate() for a in al),
                                 complex(corner), tuple(complex(r) for r in sorted(rts)),
                                 None, res, carried))
    spectrum = tuple(complex(v) for v in vals)
    return GrowthTrace(tuple(record), mat, spectrum, vecs, eig.n)
