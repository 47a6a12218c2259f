import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from specband.calculus import apply_spectral
from specband.grid import lp_norm, make_grid, mixed_norm
from specband.maximal import hl_maximal, peetre_sup
from specband.operator import hermite_decomposition

GRID = make_grid(1, 4.0, 48)
ED = hermite_decomposition(GRID)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vectors = arrays(np.float64, GRID.size, elements=finite)
exponents = st.one_of(st.floats(1.0, 8.0), st.just(np.inf))
scalars = st.floats(-50, 50, allow_nan=False)


@given(vectors, scalars, st.one_of(st.floats(0.3, 8.0), st.just(np.inf)))
def test_norm_homogeneity(f, c, p):
    assert np.isclose(lp_norm(c * f, p, GRID), abs(c) * lp_norm(f, p, GRID), rtol=1e-10, atol=1e-300)


@given(vectors, vectors, exponents)
def test_norm_triangle(f, g, p):
    assert lp_norm(f + g, p, GRID) <= (lp_norm(f, p, GRID) + lp_norm(g, p, GRID)) * (1 + 1e-12) + 1e-12


@given(arrays(np.float64, (3, GRID.size), elements=finite), arrays(np.float64, (3, GRID.size), elements=finite),
       exponents, exponents, st.sampled_from(["Lp_of_lq", "lq_of_Lp"]))
def test_mixed_norm_triangle(a, b, p, q, mode):
    lhs = mixed_norm(a + b, p, q, GRID, mode)
    rhs = mixed_norm(a, p, q, GRID, mode) + mixed_norm(b, p, q, GRID, mode)
    assert lhs <= rhs * (1 + 1e-12) + 1e-12


@settings(deadline=None, max_examples=40)
@given(vectors, vectors)
def test_hl_sublinear(f, g):
    assert np.all(hl_maximal(f + g, GRID) <= hl_maximal(f, GRID) + hl_maximal(g, GRID) + 1e-9)


@settings(deadline=None, max_examples=40)
@given(vectors, scalars)
def test_hl_homogeneous(f, c):
    np.testing.assert_allclose(hl_maximal(c * f, GRID), abs(c) * hl_maximal(f, GRID), rtol=1e-12, atol=1e-300)


@settings(deadline=None, max_examples=40)
@given(vectors, st.floats(0.1, 10.0), st.floats(0.1, 6.0))
def test_peetre_dominates(f, scale, s):
    assert np.all(peetre_sup(f, GRID, scale, s) >= np.abs(f))


coef = st.floats(-5, 5, allow_nan=False)
rates = st.floats(0.0, 2.0)


@settings(deadline=None)
@given(vectors, coef, coef, rates, rates)
def test_calculus_linear(f, a, b, r1, r2):
    phi = lambda lam: np.exp(-r1 * lam)  # noqa: E731
    theta = lambda lam: 1.0 / (1.0 + r2 * lam)  # noqa: E731
    lhs = apply_spectral(ED, lambda lam: a * phi(lam) + b * theta(lam), f)
    rhs = a * apply_spectral(ED, phi, f) + b * apply_spectral(ED, theta, f)
    scale = max(1.0, np.max(np.abs(f))) * (abs(a) + abs(b) + 1)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale * GRID.size


@settings(deadline=None)
@given(vectors, rates, rates)
def test_calculus_multiplicative(f, r1, r2):
    phi = lambda lam: np.exp(-r1 * lam)  # noqa: E731
    theta = lambda lam: 1.0 / (1.0 + r2 * lam)  # noqa: E731
    lhs = apply_spectral(ED, lambda lam: phi(lam) * theta(lam), f)
    rhs = apply_spectral(ED, phi, apply_spectral(ED, theta, f))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(f)))


@settings(deadline=None, max_examples=30)
@given(vectors, st.integers(1, 4))
def test_reproducing_identity_through_calculus(f, j):
    from specband.dyadic import make_reproducing_cutoff, make_system

    sysm = make_system(j_min=0, j_max=6, density=64)
    psi = make_reproducing_cutoff()
    piece = apply_spectral(ED, lambda lam: sysm(j, lam), f)
    again = apply_spectral(ED, lambda lam: psi.member(j, lam), piece)
    assert np.max(np.abs(again - piece)) <= 1e-10 * max(1.0, np.max(np.abs(f)))
