import mpmath as mp
import numpy as np
import pytest

from specband.dyadic import (
    DERIVATIVE_STEPS,
    BumpProfile,
    IndicatorProfile,
    make_reproducing_cutoff,
    make_system,
    measure_constants,
    richardson_derivative,
    smooth_step,
    validate_system,
    without_plateau,
)


def _psi_mp(x, a=1):
    """Independent high-precision bump: 1 - e^{-a/s} / (e^{-a/s} + e^{-a/(1-s)})."""
    s = (abs(x) - mp.mpf(1) / 2) * 2
    if s <= 0:
        return mp.mpf(1)
    if s >= 1:
        return mp.mpf(0)
    u, d = mp.e ** (-a / s), mp.e ** (-a / (1 - s))
    return 1 - u / (u + d)


@pytest.mark.parametrize("k,tol", [(1, 1e-11), (2, 1e-8), (3, 1e-6), (4, 1e-5)])
def test_profile_derivatives_against_mpmath(k, tol):
    mp.mp.dps = 40
    xs = np.linspace(0.505, 0.995, 40)
    ref = np.array([float(mp.diff(_psi_mp, mp.mpf(x), k)) for x in xs])
    got = BumpProfile().derivative(xs, k)
    assert np.max(np.abs(got - ref)) / np.max(np.abs(ref)) < tol


def test_richardson_on_polynomial():
    x = np.linspace(-1, 1, 11)
    for k in range(1, 5):
        got = richardson_derivative(lambda t: t**5, x, k)
        exact = [5 * x**4, 20 * x**3, 60 * x**2, 120 * x][k - 1]
        np.testing.assert_allclose(got, exact, atol=1e-5 * 10**k)


def test_derivative_order_bounds():
    with pytest.raises(ValueError):
        richardson_derivative(np.sin, 0.0, 5)
    assert set(DERIVATIVE_STEPS) == {1, 2, 3, 4}


def test_smooth_step_ends():
    s = np.array([-1.0, 0.0, 1.0, 2.0])
    np.testing.assert_array_equal(smooth_step(s), [0.0, 0.0, 1.0, 1.0])
    assert smooth_step(0.5) == pytest.approx(0.5)


def test_profile_shape():
    P = BumpProfile()
    x = np.linspace(-2, 2, 4001)
    v = P(x)
    assert np.all((v >= 0) & (v <= 1))
    assert np.all(v[np.abs(x) <= 0.5] == 1.0)
    assert np.all(v[np.abs(x) >= 1.0] == 0.0)
    mid = (x >= 0.5) & (x <= 1.0)
    assert np.all(np.diff(v[mid]) <= 0)


def test_partition_of_unity_point():
    sys_full = make_system(j_min=-20, j_max=20)
    assert sys_full.total(np.array([1.37]))[0] == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("j", [-3, 0, 4, 9])
def test_support_edges(system, j):
    s = make_system(j_min=-5, j_max=12)
    assert s(j, 2.0 ** (j - 3)) == 0.0
    assert s(j, 3 * 2.0**j) == 0.0
    lam = np.geomspace(2.0 ** (j - 5), 2.0 ** (j + 3), 5000)
    outside = (lam < 2.0 ** (j - 2)) | (lam > 2.0**j)
    assert np.all(s(j, lam[outside]) == 0.0)
    assert np.all(s(j, -lam[outside]) == 0.0)


def test_scaling_identity(system):
    lam = np.geomspace(1e-2, 1e3, 997)
    for j in system.js:
        np.testing.assert_array_equal(system(j, lam), system(0, 2.0 ** (-float(j)) * lam))


def test_derivative_rescaling_is_j_independent(system):
    for k in range(1, 5):
        per_j = []
        base = np.geomspace(0.25, 1.0, 2048)
        for j in system.js:
            lam = 2.0 ** float(j) * base
            per_j.append(np.max(np.abs(system.derivative(int(j), lam, k))) * 2.0 ** (k * j))
        per_j = np.array(per_j)
        assert np.max(per_j) / np.min(per_j) - 1 < 1e-9


def test_c1_matches_fine_grid_maximum(system):
    # c_1 = sup |φ_j'| 2^j = 2 sup |φ'| on the base; compare with a dense |φ'| scan
    x = np.linspace(0.5, 2.0, 200001)
    base = system.base(x)
    dense = np.max(np.abs(np.gradient(base, x)))
    c1 = measure_constants(system, 1, 4096)[1]
    assert c1 == pytest.approx(2 * dense, rel=1e-3)


def test_validate_default_range():
    report = validate_system(make_system(j_min=-20, j_max=20, density=256), (1e-3, 1e3), sample_density=512)
    assert report.passed
    assert report.support_violations == 0
    a, b = report.sum_bounds
    assert abs(a - 1) <= 1e-12 and abs(b - 1) <= 1e-12


def test_validate_truncated_range():
    report = validate_system(make_system(j_min=0, j_max=10, density=256), (2.0, 500.0), sample_density=512)
    assert report.passed


def test_validate_rejects_uncovered_range():
    report = validate_system(make_system(j_min=0, j_max=10, density=256), (1e-3, 500.0), sample_density=512)
    assert not report.passed


def test_negative_control_plateau_removed(system):
    report = validate_system(without_plateau(system), system.covered_range, sample_density=512)
    assert not report.passed
    assert report.sum_bounds[0] < report.floor


def test_validate_bad_range(system):
    with pytest.raises(ValueError):
        validate_system(system, (0.0, 1.0))
    with pytest.raises(ValueError):
        validate_system(system, (2.0, 1.0))


def test_make_system_range_check():
    with pytest.raises(ValueError):
        make_system(j_min=3, j_max=2)


def test_l2_normalized_squares_sum_to_one(system_l2):
    lam = np.geomspace(*system_l2.covered_range, 3001)
    np.testing.assert_allclose(np.sum(system_l2.table(lam) ** 2, axis=0), 1.0, atol=1e-14)


def test_indicator_profile_is_discontinuous():
    P = IndicatorProfile()
    assert P(0.75) == 1.0 and P(0.7500001) == 0.0


def test_reproducing_cutoff_values():
    psi = make_reproducing_cutoff(BumpProfile())
    assert psi(0.5) == 1.0
    assert psi(2.0) == 0.0
    x = np.linspace(-2, 2, 8001)
    v = psi(x)
    assert np.all(v[(np.abs(x) < 0.2) | (np.abs(x) > 1.25)] == 0)
    assert np.all(v[(np.abs(x) >= 0.25) & (np.abs(x) <= 1.0)] == 1)


@pytest.mark.parametrize("j", [-3, 0, 5])
def test_reproducing_identity(j):
    s = make_system(j_min=-5, j_max=8, density=64)
    psi = make_reproducing_cutoff(BumpProfile())
    lam = np.geomspace(2.0 ** (j - 4), 2.0 ** (j + 2), 20001)
    phi = s(j, lam)
    assert np.max(np.abs(psi.member(j, lam) * phi - phi)) <= 1e-14
