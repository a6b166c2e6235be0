import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobdiv.bessel import j0
from mobdiv.errors import ParameterError
from mobdiv.estimation import (
    EstimateSet,
    SmootherConfig,
    lmmse_coefficients,
    neighborhoods,
    select_qopt,
    smooth_all,
    smoother_matrix,
    theoretical_mse,
)
from mobdiv.fading import NoiseModel, correlation_factor, correlation_matrix, observe, sample_field
from mobdiv.geometry import linear_path, sample_uniform


@pytest.fixture
def line(lam):
    return sample_uniform(linear_path(1.5 * lam), 0.05 * lam)


def test_neighborhoods_singletons(line, lam):
    sets = neighborhoods(line, 0.04 * lam)
    assert all(list(J) == [k] for k, J in enumerate(sets))


def test_neighborhoods_interior_count(line, lam):
    sets = neighborhoods(line, 0.3 * lam)
    sizes = [len(J) for J in sets]
    # 0.3 / 0.05 = 6 neighbours per side
    assert sizes[6:-6] == [13] * (line.M - 12)
    assert sizes[0] == 7 and sizes[-1] == 7


def test_neighborhoods_whole_path(line, lam):
    sets = neighborhoods(line, 2.0 * lam)
    assert all(len(J) == line.M for J in sets)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 40), d=st.floats(0.01, 2.0))
def test_neighborhoods_symmetric(seed, n, d):
    lam = 0.1402
    pts = np.random.default_rng(seed).uniform(0, lam, size=(n, 2))
    sets = neighborhoods(pts, d * lam)
    for k, J in enumerate(sets):
        assert k in J
        for j in J:
            assert k in sets[j]


def test_coefficients_self_noiseless(lam):
    cfg = SmootherConfig(0.3 * lam, NoiseModel(2.0, 0.0), lam)
    np.testing.assert_array_equal(lmmse_coefficients(np.zeros((1, 2)), 0, [0], cfg), [0.5])


def test_coefficients_scalar_wiener(lam):
    cfg = SmootherConfig(0.3 * lam, NoiseModel(1.0, 0.1), lam)
    a = lmmse_coefficients(np.zeros((1, 2)), 0, [0], cfg)
    assert a[0] == pytest.approx(1 / 1.1, rel=1e-14)


@pytest.mark.parametrize("noise", [0.0, 1e-3, 0.1])
def test_coefficients_two_point_closed_form(lam, noise):
    z = 0.3827398747810062 * lam
    pts = np.array([[0.0, 0.0], [z, 0.0]])
    K = 1.3
    cfg = SmootherConfig(0.5 * lam, NoiseModel(K, noise), lam)
    a = lmmse_coefficients(pts, 0, [0, 1], cfg)
    rho = j0(2 * np.pi * z / lam)
    # 2x2 inverse by hand
    p, q = K * K + noise, K * K * rho
    det = p * p - q * q
    expected = K * np.array([p * 1.0 - q * rho, -q * 1.0 + p * rho]) / det
    np.testing.assert_allclose(a, expected, rtol=1e-9, atol=1e-15)
    assert abs(a[1]) <= 1e-6


def test_coefficients_require_self(lam):
    cfg = SmootherConfig(0.3 * lam, NoiseModel(1.0, 0.1), lam)
    with pytest.raises(ParameterError):
        lmmse_coefficients(np.zeros((2, 2)), 0, [1], cfg)


def _fields(S, lam, seeds):
    R = correlation_matrix(S.points, lam)
    L = correlation_factor(R)
    return [sample_field(R, s, factor=L) for s in seeds]


def test_noiseless_exact(line, lam):
    cfg = SmootherConfig(0.3828 * lam, NoiseModel(1.7, 0.0), lam)
    for h in _fields(line, lam, range(100)):
        est = smooth_all(observe(h, cfg.noise, 0), line, cfg)
        assert np.max(np.abs(est.estimates - h.gains)) <= 1e-8


def test_noiseless_invariant_to_radius(line, lam):
    noise = NoiseModel(1.0, 0.0)
    h = _fields(line, lam, [3])[0]
    z = observe(h, noise, 0)
    a = smooth_all(z, line, SmootherConfig(0.3828 * lam, noise, lam))
    b = smooth_all(z, line, SmootherConfig(0.3 * lam, noise, lam))
    np.testing.assert_allclose(a.estimates, b.estimates, atol=1e-12)
    assert np.all(a.neighborhood_sizes >= b.neighborhood_sizes)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), alpha=st.floats(1e-3, 1e3), snr_db=st.floats(0.0, 30.0))
def test_smoother_linear_in_measurements(seed, alpha, snr_db):
    lam = 0.1402
    line = sample_uniform(linear_path(1.5 * lam), 0.05 * lam)
    cfg = SmootherConfig(0.3828 * lam, NoiseModel.from_snr_db(snr_db), lam)
    z = observe(_fields(line, lam, [seed])[0], cfg.noise, seed)
    a = smooth_all(z, line, cfg).estimates
    np.testing.assert_allclose(smooth_all(alpha * z, line, cfg).estimates, alpha * a, rtol=1e-10, atol=0)
    assert select_qopt(smooth_all(alpha * z, line, cfg), line)[0] == select_qopt(smooth_all(z, line, cfg), line)[0]


def test_smoother_mse_monte_carlo(line, lam):
    # SNR 10 dB, 1e4 trials: beats raw measurements, matches the analytic MSE
    cfg = SmootherConfig(0.3828 * lam, NoiseModel(1.0, 0.1), lam)
    fields = _fields(line, lam, range(10000))
    A = smoother_matrix(line, cfg)
    z0 = observe(fields[0], cfg.noise, 1)
    np.testing.assert_allclose(A @ z0, smooth_all(z0, line, cfg).estimates, rtol=0, atol=1e-14)
    err = np.empty((len(fields), line.M))
    raw = np.empty_like(err)
    for i, h in enumerate(fields):
        z = observe(h, cfg.noise, 10**6 + i)
        err[i] = np.abs(A @ z - h.gains) ** 2
        raw[i] = np.abs(z / cfg.noise.amplitude - h.gains) ** 2
    emp = err.mean()
    theo = theoretical_mse(line, cfg).mean()
    assert emp < 0.1
    assert emp < raw.mean()
    assert emp == pytest.approx(theo, rel=0.05)


@pytest.mark.parametrize("snr_db", [0.0, 5.0, 20.0])
def test_smoother_beats_single_sample(line, lam, snr_db):
    cfg = SmootherConfig(0.3 * lam, NoiseModel.from_snr_db(snr_db), lam)
    assert np.all(theoretical_mse(line, cfg) <= cfg.noise.noise_variance + 1e-15)


def test_select_qopt(line):
    assert select_qopt(EstimateSet(np.array([0.3 + 0j]), np.array([1])), np.zeros((1, 2)))[0] == 0
    pts = np.arange(6.0).reshape(3, 2)
    k, p = select_qopt(np.array([0.2, -1.7j, 0.9]), pts)
    assert k == 1
    np.testing.assert_array_equal(p, [2.0, 3.0])
    # ties resolve to the lowest index
    assert select_qopt(np.array([1.0, -1.0, 1j]), pts)[0] == 0
    est = np.array([0.4, 0.1 + 0.5j, -0.2])
    assert all(select_qopt(c * est, pts)[0] == 1 for c in (1e-6, 1.0, 3e4))


def test_smooth_all_length_check(line, lam):
    cfg = SmootherConfig(0.3 * lam, NoiseModel(), lam)
    with pytest.raises(ParameterError):
        smooth_all(np.zeros(line.M - 1), line, cfg)
