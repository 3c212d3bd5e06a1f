"""Polynomials in coefficient form and their roots.

Coefficients are stored in ascending order, ``p(x) = sum(c[i] * x**i)``.
Degrees up to four are solved in closed form (quadratic formula, Cardano,
Ferrari); higher degrees go through Aberth simultaneous iteration.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegreeError, NotARootError, SizeCapError
from .linalg import as_square, hessenberg, is_hermitian, max_norm

__all__ = [
    "Polynomial", "roots", "roots_closed_form", "roots_iterative", "refine_multiple_roots",
    "deflate_known_root", "char_poly", "faddeev_leverrier", "match_multisets",
    "MultisetMatch", "CHAR_POLY_CAP",
]

#: largest matrix whose characteristic polynomial is formed in coefficient form
CHAR_POLY_CAP = 64

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Immutable polynomial with complex coefficients, ascending powers.

    Trailing coefficients that are negligible against the largest one
    (``|c| <= 1e-14 * max|c|``) are trimmed on construction so the leading
    coefficient is always significant.  The zero polynomial keeps a single
    zero coefficient and has degree 0.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=np.complex128)
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        scale = np.max(np.abs(c))
        k = c.size
        while k > 1 and abs(c[k - 1]) <= 1e-14 * scale:
            k -= 1
        c = c[:k]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, rts, leading=1.0):
        """``leading * prod(x - r)`` expanded into coefficients."""
        c = np.array([leading], dtype=np.complex128)
        for r in rts:
            c = np.concatenate([[0], c]) - r * np.concatenate([c, [0]])
        return cls(c)

    @property
    def degree(self):
        return self.coeffs.size - 1

    @property
    def leading(self):
        return complex(self.coeffs[-1])

    def is_zero(self):
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, x):
        """Horner evaluation; accepts scalars or arrays."""
        x = np.asarray(x, dtype=np.complex128)
        acc = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return complex(acc) if acc.ndim == 0 else acc

    def magnitude_at(self, x):
        """``sum |c_i| |x|^i``, the scale against which ``|p(x)|`` is judged."""
        r = abs(x)
        return float(sum(abs(c) * r ** i for i, c in enumerate(self.coeffs)))

    def relative_residual(self, x):
        """Backward error ``|p(x)| / sum |c_i| |x|^i`` of a candidate root."""
        scale = self.magnitude_at(x)
        return abs(self(x)) / scale if scale > 0 else 0.0

    def derivative(self):
        if self.degree == 0:
            return Polynomial([0])
        return Polynomial(self.coeffs[1:] * np.arange(1, self.coeffs.size))

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.coeffs * complex(other))
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        return Polynomial(np.pad(a, (0, n - a.size)) + np.pad(b, (0, n - b.size)))

    def __sub__(self, other):
        return self + other * -1.0

    def __neg__(self):
        return self * -1.0

    def conj(self):
        return Polynomial(self.coeffs.conj())

    def allclose(self, other, rtol=1e-10):
        """Coefficientwise equality relative to the larger coefficient norm."""
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        a, b = np.pad(a, (0, n - a.size)), np.pad(b, (0, n - b.size))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), np.finfo(float).tiny)
        return bool(np.max(np.abs(a - b)) <= rtol * scale)

    def __repr__(self):
        return f"Polynomial({[complex(c) for c in self.coeffs]!r})"


def _as_poly(p):
    return p if isinstance(p, Polynomial) else Polynomial(p)


def _real_if_close(z, coeffs_real):
    if coeffs_real and abs(z.imag) <= 1e-14 * max(abs(z.real), 1e-300):
        return complex(z.real, 0.0)
    return z


def _quadratic(a, b, c):
    """Roots of ``a x^2 + b x + c`` without cancellation."""
    if c == 0:
        return [0j, complex(-b / a)]
    if all(isinstance(v, float) or v.imag == 0 for v in (a, b, c)):
        a, b, c = complex(a).real, complex(b).real, complex(c).real
        disc = b * b - 4 * a * c
        if disc >= 0:
            q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
            if q == 0:
                return [0j, 0j]
            return [complex(q / a), complex(c / q)]
    a, b, c = complex(a), complex(b), complex(c)
    s = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign that makes |b + s| large
    if (b.conjugate() * s).real < 0:
        s = -s
    q = -0.5 * (b + s)
    if q == 0:
        return [0j, 0j]
    return [q / a, c / q]


def _cbrt(z):
    if z == 0:
        return 0j
    if z.imag == 0 and z.real != 0:
        return complex(math.copysign(abs(z.real) ** (1.0 / 3.0), z.real))
    return cmath.exp(cmath.log(z) / 3)


def _cubic(c0, c1, c2):
    """Roots of the monic cubic ``x^3 + c2 x^2 + c1 x + c0``."""
    shift = c2 / 3
    p = c1 - c2 * c2 / 3
    q = 2 * c2 ** 3 / 27 - c2 * c1 / 3 + c0
    real = all(complex(v).imag == 0 for v in (c0, c1, c2))
    if real:
        p, q, shift = complex(p).real, complex(q).real, complex(shift).real
        disc = (q / 2) ** 2 + (p / 3) ** 3
        if p < 0 and disc <= 0:
            # three real roots: trigonometric branch
            r = 2 * math.sqrt(-p / 3)
            arg = max(-1.0, min(1.0, 3 * q / (p * r)))
            theta = math.acos(arg) / 3
            return [complex(r * math.cos(theta - 2 * math.pi * k / 3) - shift)
                    for k in range(3)]
    p, q = complex(p), complex(q)
    if p == 0:
        u = _cbrt(-q)
        w = cmath.exp(2j * math.pi / 3)
        return [u - shift, u * w - shift, u * w * w - shift]
    s = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    t = -q / 2 + s if abs(-q / 2 + s) >= abs(-q / 2 - s) else -q / 2 - s
    u = _cbrt(t)
    w = cmath.exp(2j * math.pi / 3)
    out = []
    for k in range(3):
        uk = u * w ** k
        out.append(uk - p / (3 * uk) - shift)
    return out


def _quartic(c0, c1, c2, c3):
    """Roots of the monic quartic ``x^4 + c3 x^3 + c2 x^2 + c1 x + c0`` (Ferrari)."""
    shift = c3 / 4
    p = c2 - 3 * c3 * c3 / 8
    q = c1 - c3 * c2 / 2 + c3 ** 3 / 8
    r = c0 - c3 * c1 / 4 + c3 * c3 * c2 / 16 - 3 * c3 ** 4 / 256
    scale = max(abs(p), abs(q) ** (2 / 3), abs(r) ** 0.5, 1e-300)
    if abs(q) <= 1e-14 * scale ** 1.5:
        # biquadratic in y = x^2
        out = []
        for y in _quadratic(1.0, p, r):
            s = cmath.sqrt(y)
            out += [s - shift, -s - shift]
        return out
    # resolvent cubic 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0
    ms = _cubic(-q * q / 8, (2 * p * p - 8 * r) / 8, p)
    m = max(ms, key=abs)
    s = cmath.sqrt(2 * m)
    out = []
    for sign in (1, -1):
        out += [y - shift for y in _quadratic(1.0, sign * s, p / 2 + m - sign * q / (2 * s))]
    return out


def _polish(p, z, steps=3):
    """Newton refinement kept only while it lowers the backward error."""
    dp = p.derivative()
    best, best_res = z, p.relative_residual(z)
    for _ in range(steps):
        d = dp(best)
        if d == 0 or best_res == 0:
            break
        cand = best - p(best) / d
        res = p.relative_residual(cand)
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def roots_closed_form(p):
    """All roots (with multiplicity) of a polynomial of degree 1 to 4."""
    p = _as_poly(p)
    n = p.degree
    if not 1 <= n <= 4:
        raise DegreeError(f"closed-form roots need degree 1..4, got {n}")
    c = p.coeffs / p.coeffs[-1]
    real = bool(np.all(c.imag == 0))
    c = [complex(v) for v in c]
    if n == 1:
        rts = [-c[0]]
    elif n == 2:
        rts = _quadratic(1 + 0j, c[1], c[0])
    elif n == 3:
        rts = _cubic(c[0], c[1], c[2])
    else:
        rts = _quartic(c[0], c[1], c[2], c[3])
    if n > 2:
        rts = [_polish(p, complex(z)) for z in rts]
    return [_real_if_close(complex(z), real) for z in rts]


def roots_iterative(p, max_sweeps=500):
    """All roots by Aberth-Ehrlich simultaneous iteration.

    Every returned root satisfies ``p.relative_residual(r) <= 1e-8``;
    otherwise :class:`ConvergenceError` is raised with the best residual.
    """
    p = _as_poly(p)
    n = p.degree
    if n < 1:
        raise DegreeError("roots need degree >= 1")
    c = p.coeffs / p.coeffs[-1]
    if n == 1:
        return [complex(-c[0])]
    monic = Polynomial(c)
    dmonic = monic.derivative()
    # start on a circle of radius given by the Fujiwara bound, rotated off-axis
    bound = 2 * max(abs(c[n - k]) ** (1.0 / k) for k in range(1, n + 1))
    center = -c[n - 1] / n
    radius = max(bound, 1e-12) / 2
    z = center + radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    done = np.zeros(n, dtype=bool)
    for _ in range(max_sweeps):
        for i in range(n):
            if done[i]:
                continue
            pv = monic(z[i])
            if abs(pv) <= 4 * _EPS * monic.magnitude_at(z[i]):
                done[i] = True
                continue
            ratio = pv / dmonic(z[i]) if dmonic(z[i]) != 0 else pv
            others = z[i] - np.delete(z, i)
            others[others == 0] = 1e-300
            w = ratio / (1 - ratio * np.sum(1.0 / others))
            z[i] -= w
            if abs(w) <= 4 * _EPS * abs(z[i]):
                done[i] = True
        if done.all():
            break
    res = [p.relative_residual(complex(v)) for v in z]
    if max(res) > 1e-8:
        raise ConvergenceError(
            f"Aberth iteration did not converge in {max_sweeps} sweeps", max(res))
    real = bool(np.all(c.imag == 0))
    return [_real_if_close(_polish(p, complex(v), 2), real) for v in z]


def _clusters(rts, radius):
    n = len(rts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(rts[i] - rts[j]) <= radius * max(1.0, abs(rts[i])):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def refine_multiple_roots(p, rts, radius=1e-3, rtol=None):
    """Merge clusters that are numerically one multiple root.

    An ``m``-fold root perturbed by rounding splits into ``m`` roots about
    ``eps**(1/m)`` apart.  For each cluster the simple root ``z`` of the
    ``(m-1)``-th derivative next to the cluster mean is found by Newton, and
    the cluster is replaced by ``m`` copies of ``z`` when ``p`` and its first
    ``m-2`` derivatives all vanish at ``z`` to within ``rtol`` relative
    backward error.  Clusters that fail the test are left untouched.
    """
    p = _as_poly(p)
    rtol = 16 * max(p.degree, 1) * _EPS if rtol is None else rtol
    rts = [complex(r) for r in rts]
    out = list(rts)
    for group in _clusters(rts, radius):
        m = len(group)
        if m < 2:
            continue
        derivs = [p]
        for _ in range(m - 1):
            derivs.append(derivs[-1].derivative())
        z = complex(np.mean([rts[i] for i in group]))
        z = _polish(derivs[-1], z, steps=8)
        if all(d.relative_residual(z) <= rtol for d in derivs[:-1]):
            real = abs(z.imag) <= rtol * abs(z)
            for i in group:
                out[i] = complex(z.real) if real else z
    return out


def roots(p):
    """Closed form up to degree 4, iterative beyond; multiple roots refined."""
    p = _as_poly(p)
    if p.degree == 0:
        return []
    rts = roots_closed_form(p) if p.degree <= 4 else roots_iterative(p)
    return refine_multiple_roots(p, rts)


def deflate_known_root(p, r, tol=1e-8, force=False):
    """Divide ``p`` by ``(x - r)`` with synthetic division, dropping the remainder.

    ``r`` must satisfy ``p.relative_residual(r) <= tol`` unless ``force``.
    """
    p = _as_poly(p)
    if p.degree < 1:
        raise DegreeError("cannot deflate a constant polynomial")
    r = complex(r)
    if not force and p.relative_residual(r) > tol:
        raise NotARootError(
            f"{r} is not a root (relative residual {p.relative_residual(r):.3g})")
    c = p.coeffs
    n = p.degree
    q = np.zeros(n, dtype=np.complex128)
    acc = 0j
    for i in range(n, 0, -1):
        acc = acc * r + c[i]
        q[i - 1] = acc
    return Polynomial(q)


def char_poly(m):
    """Coefficients of ``det(m - x I)`` (leading coefficient ``(-1)^n``).

    Reduces ``m`` to upper Hessenberg form and runs La Budde's recurrence
    over its leading principal submatrices, which stays accurate at roots
    far inside the spectral radius.
    """
    a = as_square(m)
    n = a.shape[0]
    if n > CHAR_POLY_CAP:
        raise SizeCapError(f"char_poly is capped at n={CHAR_POLY_CAP}, got {n}")
    h = hessenberg(a)
    # ps[k] holds ascending coefficients of det(H[:k, :k] - x I)
    ps = [np.ones(1, dtype=np.complex128)]
    for k in range(n):
        p = np.zeros(k + 2, dtype=np.complex128)
        p[:k + 1] += h[k, k] * ps[k]
        p[1:] -= ps[k]
        prod = 1.0
        for i in range(k - 1, -1, -1):
            prod *= -h[i + 1, i]  # cofactor sign alternates with distance from the diagonal
            p[:i + 1] += h[i, k] * prod * ps[i]
        ps.append(p)
    coeffs = ps[n]
    coeffs[n] = (-1) ** n
    if not np.any(a.imag) or is_hermitian(a):
        coeffs = coeffs.real.astype(np.complex128)  # real by symmetry, drop rounding noise
    return Polynomial(coeffs)


def faddeev_leverrier(m):
    """``det(m - x I)`` via the Faddeev-LeVerrier trace recursion."""
    a = as_square(m)
    n = a.shape[0]
    # monic det(x I - a) = x^n + c_{n-1} x^{n-1} + ... + c_0
    c = np.zeros(n + 1, dtype=np.complex128)
    c[n] = 1
    mk = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + c[n - k + 1] * eye
        c[n - k] = -np.trace(a @ mk) / k
    return Polynomial(c * (-1) ** n)


@dataclass(frozen=True)
class MultisetMatch:
    """Outcome of matching two multisets of complex numbers."""

    ok: bool
    max_distance: float
    pairs: tuple
    unmatched_left: tuple
    unmatched_right: tuple
    ambiguous: bool


def match_multisets(left, right, tol):
    """Greedy minimal-distance pairing of two multisets.

    Pairs are taken in increasing distance; equal distances go to the lower
    left index, then the lower right index.  ``ambiguous`` is set when some
    accepted pair had a competing candidate within ``tol``.
    """
    a = np.asarray(list(left), dtype=np.complex128)
    b = np.asarray(list(right), dtype=np.complex128)
    if a.size == 0 or b.size == 0:
        return MultisetMatch(a.size == b.size, 0.0, (), tuple(range(a.size)),
                             tuple(range(b.size)), False)
    d = np.abs(a[:, None] - b[None, :])
    order = sorted(((d[i, j], i, j) for i in range(a.size) for j in range(b.size)))
    used_a, used_b, pairs = set(), set(), []
    ambiguous = False
    for dist, i, j in order:
        if i in used_a or j in used_b:
            continue
        free_b = [k for k in range(b.size) if k not in used_b and k != j]
        free_a = [k for k in range(a.size) if k not in used_a and k != i]
        if dist <= tol and (any(d[i, k] <= tol for k in free_b)
                            or any(d[k, j] <= tol for k in free_a)):
            ambiguous = True
        used_a.add(i)
        used_b.add(j)
        pairs.append((i, j, float(dist)))
    max_d = max(p[2] for p in pairs)
    ul = tuple(i for i in range(a.size) if i not in used_a)
    ur = tuple(j for j in range(b.size) if j not in used_b)
    ok = max_d <= tol and not ul and not ur
    return MultisetMatch(ok, max_d, tuple(pairs), ul, ur, ambiguous)
