import numpy as np
import pytest

from specband.calculus import (
    apply_spectral,
    band_guard,
    heat_kernel_eigen,
    mehler_gradient_factor,
    mehler_kernel,
    mehler_log_kernel,
    spectral_kernel,
)
from specband.grid import make_grid


def _hermite_at_zero_sq(kmax):
    """h_k(0)^2 from the three-term recurrence h_{k+1}(0) = -sqrt(k/(k+1)) h_{k-1}(0)."""
    h = np.zeros(kmax + 1)
    h[0] = np.pi**-0.25
    for k in range(1, kmax):
        h[k + 1] = -np.sqrt(k / (k + 1)) * h[k - 1]
    return h**2


def test_identity_function_returns_f(herm_small, rng):
    f = rng.normal(size=herm_small.grid.size) * herm_small.grid.interior
    out = apply_spectral(herm_small, lambda lam: np.ones_like(lam), f)
    assert np.max(np.abs(out - f)) <= 1e-10


def test_heat_on_ground_state(herm_small):
    e0 = herm_small.vectors[:, 0]
    t = 0.7
    out = apply_spectral(herm_small, lambda lam: np.exp(-t * lam), e0)
    np.testing.assert_allclose(out, np.exp(-t * herm_small.values[0]) * e0, atol=1e-12)
    assert herm_small.values[0] == pytest.approx(1.0, abs=1e-6)


def test_spectral_projector(herm_small, rng):
    f = rng.normal(size=herm_small.grid.size)
    lam5 = herm_small.values[5]
    out = apply_spectral(herm_small, lambda lam: (lam == lam5).astype(float), f)
    e5 = herm_small.vectors[:, 5]
    np.testing.assert_allclose(out, herm_small.grid.inner(e5, f) * e5, atol=1e-12)


def test_nonfinite_phi_rejected(herm_small):
    with pytest.raises(ValueError), np.errstate(divide="ignore"):
        apply_spectral(herm_small, lambda lam: 1.0 / (lam - herm_small.values[3]), np.ones(herm_small.grid.size))


def test_identity_kernel_is_delta(herm_small, rng):
    K = spectral_kernel(herm_small, lambda lam: np.ones_like(lam))
    f = rng.normal(size=herm_small.grid.size) * herm_small.grid.interior
    assert np.max(np.abs(K.apply(f) - f)) <= 1e-10


def test_row_sum_matches_apply(herm_small):
    phi = lambda lam: np.exp(-0.3 * lam)  # noqa: E731
    K = spectral_kernel(herm_small, phi)
    ones = np.ones(herm_small.grid.size)
    np.testing.assert_allclose(K.apply(ones), apply_spectral(herm_small, phi, ones), atol=1e-12)


def test_kernel_symmetric(herm_small, system):
    K = spectral_kernel(herm_small, lambda lam: system(3, lam))
    assert K.asymmetry() <= 1e-10


def test_heat_positivity(herm_small):
    for t in (0.05, 0.5, 2.0):
        assert heat_kernel_eigen(herm_small, t).values.min() >= -1e-8


def test_heat_semigroup(herm_small):
    t = 0.4
    half = heat_kernel_eigen(herm_small, t / 2).values
    full = heat_kernel_eigen(herm_small, t).values
    w = herm_small.grid.weights
    comp = half @ (w[:, None] * half)
    assert np.max(np.abs(comp - full)) <= 1e-8 * np.max(np.abs(full))


def test_heat_small_t_limit(herm_small):
    # band-limited f: e^{-tH} f -> f as t -> 0
    f = herm_small.synthesize(np.r_[1.0, 0.5, -0.25, np.zeros(len(herm_small) - 3)])
    errs = [np.max(np.abs(heat_kernel_eigen(herm_small, t).apply(f) - f)) for t in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


def test_heat_needs_positive_time(herm_small):
    with pytest.raises(ValueError):
        heat_kernel_eigen(herm_small, 0.0)
    with pytest.raises(ValueError):
        mehler_kernel(herm_small.grid, -1.0)


def test_mehler_center_value_against_series():
    t = 0.5
    k = np.arange(121)
    series = np.sum(np.exp(-(2 * k + 1) * t) * _hermite_at_zero_sq(120))
    g = make_grid(1, 4.0, 65)
    K = mehler_kernel(g, t)
    c = g.size // 2
    assert K.values[c, c] == pytest.approx(series, rel=1e-12)
    assert series == pytest.approx((2 * np.pi * np.sinh(1.0)) ** -0.5, rel=1e-12)
    assert series == pytest.approx(0.36800, abs=1e-5)


def test_mehler_gradient_vanishes_at_origin():
    g = make_grid(1, 4.0, 65)
    K = mehler_kernel(g, 0.5, with_gradient=True)
    c = g.size // 2
    assert K.gradient[0, c, c] == 0.0


def test_mehler_gradient_against_difference_quotient():
    t, d = 0.3, 1e-5
    x = np.array([[0.7, -0.2]])
    y = np.array([[-0.4, 0.9]])
    K = np.exp(mehler_log_kernel(x, y, t))
    analytic = K[0] * mehler_gradient_factor(x, y, t)[0]
    for a in range(2):
        e = np.zeros((1, 2))
        e[0, a] = d
        fd = (np.exp(mehler_log_kernel(x + e, y, t)) - np.exp(mehler_log_kernel(x - e, y, t)))[0] / (2 * d)
        assert fd == pytest.approx(analytic[a], rel=1e-7)


def test_mehler_no_overflow():
    g = make_grid(1, 40.0, 41)
    K = mehler_kernel(g, 1e-3, with_gradient=True)
    assert np.all(np.isfinite(K.values)) and np.all(np.isfinite(K.gradient))
    K = mehler_kernel(g, 400.0, with_gradient=True)
    assert np.all(np.isfinite(K.values)) and np.all(np.isfinite(K.gradient))


def test_mehler_matches_eigen_series(herm_full):
    g = herm_full.grid
    sel = np.abs(g.points[:, 0]) <= 4
    for t in (0.1, 0.5, 1.0):
        exact = mehler_kernel(g, t).values[np.ix_(sel, sel)]
        num = heat_kernel_eigen(herm_full, t).values[np.ix_(sel, sel)]
        assert np.max(np.abs(num - exact)) / np.max(exact) <= 1e-6


def test_mehler_two_dimensional_factorises():
    g1 = make_grid(1, 3.0, 7)
    g2 = make_grid(2, 3.0, 7)
    t = 0.8
    K1 = mehler_kernel(g1, t).values
    K2 = mehler_kernel(g2, t).values
    np.testing.assert_allclose(K2, np.kron(K1, K1), rtol=1e-12)


def test_kernel_csv_header(tmp_path, herm_small):
    g = make_grid(1, 2.0, 9)
    K = mehler_kernel(g, 0.5, with_gradient=True)
    path = K.to_csv(tmp_path / "k.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "x_index,y_index,value,grad_0"
    assert len(lines) == 1 + g.size**2


def test_band_guard(herm_small, caplog):
    assert band_guard(herm_small, 1.0)
    with caplog.at_level("WARNING", logger="specband"):
        assert not band_guard(herm_small, 1e9, "j=30")
    assert "resolved cutoff" in caplog.text
