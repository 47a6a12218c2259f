import numpy as np
import pytest

from specband import _kernels
from specband.grid import make_grid
from specband.maximal import MaximalConfig, default_config, dyadic_piece, hl_maximal, peetre_maximal, peetre_sup


def _brute_hl(f, grid, radii):
    """Plain-loop oracle: max over balls centred at x of Σ w|f| / Σ w."""
    pts, w, a = grid.points, grid.weights, np.abs(f)
    out = np.zeros(grid.size)
    for i in range(grid.size):
        best = 0.0
        for r in radii:
            mass = num = 0.0
            for k in range(grid.size):
                if np.sqrt(np.sum((pts[i] - pts[k]) ** 2)) <= r * (1 + 1e-9):
                    mass += w[k]
                    num += w[k] * a[k]
            if mass > 0:
                best = max(best, num / mass)
        out[i] = best
    return out


def _brute_peetre(values, grid, scale, s):
    pts = grid.points
    out = np.zeros(grid.size)
    for i in range(grid.size):
        d = np.sqrt(np.sum((pts - pts[i]) ** 2, axis=1))
        out[i] = np.max(np.abs(values) / (1 + scale * d) ** s)
    return out


def test_constant_function():
    g = make_grid(1, 3.0, 61)
    np.testing.assert_allclose(hl_maximal(np.full(g.size, -2.5), g), 2.5, rtol=1e-14)


@pytest.mark.parametrize("n,P", [(1, 81), (2, 15)])
def test_dominates_abs(n, P, rng):
    g = make_grid(n, 2.0, P)
    f = rng.normal(size=g.size)
    assert np.all(hl_maximal(f, g) >= np.abs(f))


@pytest.mark.parametrize("n,P", [(1, 41), (2, 9)])
def test_against_brute_force(n, P, rng):
    g = make_grid(n, 2.0, P)
    f = rng.normal(size=g.size)
    radii = default_config(g).radii
    np.testing.assert_allclose(hl_maximal(f, g), _brute_hl(f, g, radii), rtol=1e-12)


def test_spike():
    g = make_grid(1, 16.0, 321)
    f = np.zeros(g.size)
    c = g.size // 2
    f[c] = 1.0 / g.weights[c]  # unit mass
    radii = default_config(g).radii
    Mf = hl_maximal(f, g)
    np.testing.assert_allclose(Mf, _brute_hl(f, g, radii), rtol=1e-12)
    # the best ball is the smallest one reaching the spike; far from the wall
    # its mass is ~2r (plus one cell for the node count)
    x = g.points[:, 0]
    near = (np.abs(x - x[c]) > 0.5) & (np.abs(x - x[c]) < 1.5)
    approx = [max(1 / (2 * r + g.h) for r in radii if r * (1 + 1e-9) >= abs(xi - x[c])) for xi in x[near]]
    np.testing.assert_allclose(Mf[near], approx, rtol=1e-9)


def test_sublinear(rng):
    g = make_grid(1, 3.0, 121)
    f, h = rng.normal(size=(2, g.size))
    assert np.all(hl_maximal(f + h, g) <= hl_maximal(f, g) + hl_maximal(h, g) + 1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        MaximalConfig(())
    with pytest.raises(ValueError):
        MaximalConfig((1.0, 0.5))
    g = make_grid(2, 3.0, 11)
    r = default_config(g).radii
    assert r[0] == pytest.approx(g.h / 2) and r[-1] == pytest.approx(2 * 3.0 * np.sqrt(2))


@pytest.mark.parametrize("n,P", [(1, 57), (2, 11)])
def test_peetre_against_brute_force(n, P, rng):
    g = make_grid(n, 2.0, P)
    v = rng.normal(size=g.size)
    np.testing.assert_allclose(peetre_sup(v, g, 2.0, 1.5), _brute_peetre(v, g, 2.0, 1.5), rtol=1e-13)


def test_peetre_dominates_piece(herm_small, system, rng):
    f = herm_small.synthesize(rng.normal(size=len(herm_small)) * (herm_small.values < 60))
    for j in (1, 3, 5):
        piece = dyadic_piece(system, herm_small, j, f)
        star = peetre_maximal(system, herm_small, j, 2.0, f)
        assert np.all(star >= np.abs(piece))


def test_peetre_annihilated_eigenfunction(herm_small, system):
    k = 3  # λ_3 = 7 lies outside supp φ_1 = [1/2, 2]
    e = herm_small.vectors[:, k]
    assert system(1, herm_small.values[k]) == 0
    # zero up to the roundoff in <e_k, e_3> for k != 3
    assert np.max(peetre_maximal(system, herm_small, 1, 2.0, e)) <= 1e-14
    assert np.max(peetre_maximal(system, herm_small, 1, 2.0, e, order="star_star")) <= 1e-12


def test_peetre_large_s(herm_small, system, rng):
    f = herm_small.synthesize(rng.normal(size=len(herm_small)) * (herm_small.values < 40))
    j = 4
    a = np.abs(dyadic_piece(system, herm_small, j, f))
    top = np.argmax(a)
    gaps = []
    for s in (8, 16, 32):
        star = peetre_maximal(system, herm_small, j, s, f)
        assert star[top] == a[top]
        gaps.append(np.max(star - a))
    assert gaps[0] > gaps[1] > gaps[2]


def test_peetre_star_star_nonnegative(herm_small, system, rng):
    f = herm_small.synthesize(rng.normal(size=len(herm_small)) * (herm_small.values < 40))
    assert np.all(peetre_maximal(system, herm_small, 3, 2.0, f, order="star_star") >= 0)


def test_peetre_errors(herm_small, system):
    f = np.zeros(herm_small.grid.size)
    with pytest.raises(ValueError):
        peetre_maximal(system, herm_small, 3, 0.0, f)
    with pytest.raises(ValueError):
        peetre_maximal(system, herm_small, 30, 1.0, f)
    with pytest.raises(ValueError):
        peetre_maximal(system, herm_small, 3, 1.0, f, order="triple")


# numba and numpy paths


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba missing")
class TestBackendsAgree:
    @pytest.fixture
    def data(self, rng):
        g = make_grid(2, 2.0, 13)
        return g, rng.normal(size=g.size), rng.normal(size=(g.size, g.size))

    def test_peetre(self, data):
        g, v, _ = data
        a = _kernels.peetre_sup_numpy(g.points, np.abs(v), 1.7, 2.3)
        b = _kernels.peetre_sup_numba(g.points, np.abs(v), 1.7, 2.3)
        np.testing.assert_allclose(a, b, rtol=1e-14)

    def test_ball_average(self, data):
        g, v, _ = data
        radii = np.asarray(default_config(g).radii)
        a = _kernels.ball_max_average_numpy(g.points, g.weights, np.abs(v), radii)
        b = _kernels.ball_max_average_numba(g.points, g.weights, np.abs(v), radii)
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_weighted_sup(self, data):
        g, _, K = data
        a = _kernels.weighted_abs_sup_numpy(np.abs(K), g.points, 1.3, 4.0)
        b = _kernels.weighted_abs_sup_numba(np.abs(K), g.points, 1.3, 4.0)
        assert a == pytest.approx(b, rel=1e-14)

    def test_weighted_l1(self, data):
        g, _, K = data
        a = _kernels.weighted_l1_columns_numpy(K, g.points, g.weights, 1.3, 2.0)
        b = _kernels.weighted_l1_columns_numba(K, g.points, g.weights, 1.3, 2.0)
        np.testing.assert_allclose(a, b, rtol=1e-12)


def test_backend_name():
    assert _kernels.backend() in ("numba", "numpy")
