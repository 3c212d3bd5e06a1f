import numpy as np
import pytest
from hypothesis import given, strategies as st

from bordereig.errors import DegreeError, NotARootError, SizeCapError
from bordereig.polyroots import (Polynomial, char_poly, deflate_known_root, faddeev_leverrier,
                                 match_multisets, refine_multiple_roots, roots,
                                 roots_closed_form, roots_iterative)
from strategies import seeds


def close_multiset(a, b, tol):
    return match_multisets(a, b, tol).ok


def test_trailing_zeros_are_trimmed():
    p = Polynomial([1, 2, 0, 1e-20])
    assert p.degree == 1 and p.leading == 2


def test_arithmetic_and_derivative():
    p = Polynomial([1, 1])  # 1 + x
    q = p * p
    assert np.allclose(q.coeffs, [1, 2, 1])
    assert np.allclose(q.derivative().coeffs, [2, 2])
    assert (q - p * p).is_zero
    assert q(2) == 9


def test_quadratic_examples():
    assert close_multiset(roots_closed_form(Polynomial([-1, 0, 1])), [1, -1], 1e-15)
    # complex pair: x^2 + 1
    assert close_multiset(roots_closed_form(Polynomial([1, 0, 1])), [1j, -1j], 1e-15)


def test_biquadratic():
    p = Polynomial([4, 0, -5, 0, 1])
    assert close_multiset(roots_closed_form(p), [1, -1, 2, -2], 1e-12)


def test_quartic_from_expanded_roots():
    p = Polynomial([24, -50, 35, -10, 1])  # (x-1)(x-2)(x-3)(x-4), expanded by hand
    assert close_multiset(roots_closed_form(p), [1, 2, 3, 4], 1e-10)


def test_cubic_three_real_roots_and_complex_coefficients():
    p = Polynomial([-6, 11, -6, 1])
    assert close_multiset(roots_closed_form(p), [1, 2, 3], 1e-12)
    r = [1j, 2 - 1j, -0.5]
    assert close_multiset(roots_closed_form(Polynomial.from_roots(r)), r, 1e-12)


def test_closed_form_degree_bounds():
    with pytest.raises(DegreeError):
        roots_closed_form(Polynomial([3]))
    with pytest.raises(DegreeError):
        roots_closed_form(Polynomial.from_roots([1, 2, 3, 4, 5]))
    assert roots(Polynomial([3])) == []


def test_iterative_examples():
    assert close_multiset(roots_iterative(Polynomial([-4, 2])), [2], 1e-15)
    p = Polynomial([720, -1764, 1624, -735, 175, -21, 1])  # prod (x-k), k = 1..6
    assert close_multiset(roots_iterative(p), [1, 2, 3, 4, 5, 6], 1e-8)


def test_closed_form_roots_meet_backward_error_bound(rng):
    for _ in range(200):
        deg = int(rng.integers(1, 5))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        p = Polynomial(c)
        for r in roots_closed_form(p):
            assert abs(p(r)) <= 1e-9 * np.linalg.norm(p.coeffs) * max(1, abs(r)) ** deg


def test_iterative_agrees_with_closed_form_on_random_quartics(rng):
    for _ in range(1000):
        p = Polynomial(rng.normal(size=5) + 1j * rng.normal(size=5))
        assert close_multiset(roots_iterative(p), roots_closed_form(p), 1e-7)


def test_deflate_known_root_examples():
    b1, b2, b3 = 2.0, -3.0, 5.0
    q = deflate_known_root(Polynomial([0, b3, b2, b1, 1]), 0)
    assert np.allclose(q.coeffs, [b3, b2, b1, 1])
    q = deflate_known_root(Polynomial.from_roots([1, 2]), 1)
    assert np.allclose(q.coeffs, [-2, 1])
    with pytest.raises(NotARootError):
        deflate_known_root(Polynomial.from_roots([1, 2]), 1.5)


def test_char_poly_examples():
    assert np.allclose(char_poly(np.diag([1, 2])).coeffs, [2, -3, 1])
    # companion of x^3 - 6x^2 + 11x - 6; det(C - xI) = -(x^3 - 6x^2 + 11x - 6)
    c = np.array([[0, 0, 6], [1, 0, -11], [0, 1, 6]], dtype=complex)
    assert np.allclose(char_poly(c).coeffs, [6, -11, 6, -1])
    with pytest.raises(SizeCapError):
        char_poly(np.eye(65))


def test_char_poly_roots_match_independent_eigenvalues(rng):
    for _ in range(20):
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        assert close_multiset(roots(char_poly(m)), np.linalg.eigvals(m), 1e-8)


def test_char_poly_agrees_with_faddeev_leverrier(rng):
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert char_poly(m).allclose(faddeev_leverrier(m), rtol=1e-10)


def test_multiple_roots_are_recovered_exactly():
    assert roots(Polynomial.from_roots([2, 2, 2, -1])) == [-1, 2, 2, 2]
    noisy = Polynomial([1 + 2e-15, -2 + 1e-15j, 1])  # (x - 1)^2 up to rounding
    assert roots(noisy) == [1, 1]


def test_refinement_leaves_separated_roots_alone():
    rts = [1, 1 + 1e-4, 3]
    p = Polynomial.from_roots(rts)
    assert close_multiset(refine_multiple_roots(p, roots_closed_form(p)), rts, 1e-11)


def test_multiset_matching():
    m = match_multisets([1, 2, 2], [2, 1, 2 + 1e-12], 1e-9)
    assert m.ok and m.max_distance <= 2e-12
    m = match_multisets([1, 2], [1, 2, 3], 1e-9)
    assert not m.ok and m.unmatched_right == (2,)
    assert match_multisets([0, 1e-10], [0, 0], 1e-9).ambiguous


@given(seeds, st.integers(1, 6))
def test_roots_reexpand_to_the_input(seed, deg):
    rng = np.random.default_rng(seed)
    p = Polynomial(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
    back = Polynomial.from_roots(roots(p), p.leading)
    assert np.max(np.abs(back.coeffs - p.coeffs)) <= 1e-7 * np.max(np.abs(p.coeffs))


@given(seeds, st.integers(1, 4))
def test_roots_invariant_under_scaling(seed, deg):
    rng = np.random.default_rng(seed)
    p = Polynomial(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
    s = complex(*rng.normal(size=2)) * 10 ** rng.uniform(-3, 3)
    assert close_multiset(roots(p), roots(p * s), 1e-7 * max(1, max(abs(r) for r in roots(p))))


@given(seeds)
def test_deflation_multiplies_back(seed):
    rng = np.random.default_rng(seed)
    r = complex(*rng.normal(size=2))
    rest = rng.normal(size=5) + 1j * rng.normal(size=5)
    p = Polynomial(rest) * Polynomial([-r, 1])
    q = deflate_known_root(p, r)
    assert q.degree == p.degree - 1
    back = q * Polynomial([-r, 1])
    assert np.max(np.abs(back.coeffs - p.coeffs)) <= 1e-10 * np.max(np.abs(p.coeffs))


def test_char_poly_accurate_at_small_interior_eigenvalues(rng):
    # eigenvalues spread over three decades: small ones sit deep inside the spectral radius
    values = np.concatenate([[0.05, -0.2, 0.7], rng.uniform(5, 40, 9)])
    q, _ = np.linalg.qr(rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12)))
    p = char_poly((q * values) @ q.conj().T)
    assert max(p.relative_residual(v) for v in values) < 1e-10
