import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobdiv.config import ExperimentConfig, PathSection
from mobdiv.errors import ParameterError
from mobdiv.estimation import SmootherConfig, select_qopt, smooth_all
from mobdiv.fading import NoiseModel, correlation_matrix, observe, sample_field
from mobdiv.geometry import choose_orientation, circular_path, fit_spline, linear_path, sample_uniform
from mobdiv.pathopt import AnnealingConfig
from mobdiv.sim import (
    EnergyModel,
    StoppingConfig,
    TrialConfig,
    monte_carlo,
    run_cmda_trial,
    run_stopping_trial,
    simulate_trials,
    sweep,
    trial_seed,
)

FAST = AnnealingConfig(iterations_per_temperature=40, cooling_factor=0.9, restarts=2, seed=0)


def harmonic(m):
    return sum(1.0 / k for k in range(1, m + 1))


@pytest.fixture
def noisy(lam):
    return SmootherConfig(0.3828 * lam, NoiseModel(1.0, 0.1), lam)


@pytest.fixture
def clean(lam):
    return SmootherConfig(0.3828 * lam, NoiseModel(1.0, 0.0), lam)


def test_trial_matches_operation_chain(lam, noisy):
    path = choose_orientation(linear_path(0.8 * lam))
    energy = EnergyModel(2.0, 0.3, 0.7)
    for seed in (1, 2, 3):
        res = run_cmda_trial(TrialConfig(path, 0.05 * lam, noisy, energy, seed))
        S = sample_uniform(path, 0.05 * lam)
        h = sample_field(correlation_matrix(S.points, lam), seed)
        z = observe(h, noisy.noise, seed)
        k, q = select_qopt(smooth_all(z, S, noisy), S)
        assert res.index == k
        np.testing.assert_allclose(res.q_opt, q, atol=0)
        assert res.true_power == pytest.approx(abs(h.gains[k]) ** 2, rel=1e-12)
        dist = math.dist(q, path.end)
        assert res.positioning_distance == pytest.approx(dist, abs=1e-15)
        assert res.energy == pytest.approx(2 * energy.start_cost + 0.7 * (path.length + dist), rel=1e-14)


def test_true_power_not_estimate(lam):
    # at 0 dB the chosen point is often not the true best one
    cfg = SmootherConfig(0.3 * lam, NoiseModel.from_snr_db(0.0), lam)
    tc = TrialConfig(choose_orientation(linear_path(1.5 * lam)), 0.05 * lam, cfg)
    clean_cfg = replace(tc, smoother=replace(cfg, noise=NoiseModel()))
    noisy_batch = simulate_trials(tc, 3000, 9)
    clean_batch = simulate_trials(clean_cfg, 3000, 9)
    assert np.mean(noisy_batch.index != clean_batch.index) > 0.05
    assert np.mean(noisy_batch.true_power) < np.mean(clean_batch.true_power)
    assert np.all(noisy_batch.true_power <= clean_batch.true_power + 1e-12)


def test_monte_carlo_matches_single_trials(lam, noisy):
    tc = TrialConfig(circular_path(1.0 * lam), 0.05 * lam, noisy)
    batch = simulate_trials(tc, 40, 123)
    for i in range(40):
        res = run_cmda_trial(replace(tc, seed=trial_seed(123, i)))
        assert res.index == batch.index[i]
        assert res.true_power == pytest.approx(batch.true_power[i], rel=1e-12)
        assert res.energy == pytest.approx(batch.energy[i], rel=1e-14)


def test_monte_carlo_deterministic(lam, noisy):
    tc = TrialConfig(choose_orientation(linear_path(0.6 * lam)), 0.05 * lam, noisy)
    a = monte_carlo(tc, 5000, 77)
    assert a == monte_carlo(tc, 5000, 77)
    assert a == monte_carlo(tc, 5000, 77, workers=3)
    assert a != monte_carlo(tc, 5000, 78)


def test_single_point_unit_power(clean):
    stats = monte_carlo(StoppingConfig(np.zeros((1, 2)), 1, clean), 100000, 5)
    assert abs(stats.mean_power - 1.0) <= 3 * stats.stderr_power
    assert stats.M == 1


def test_cmda_identity_hook_harmonic(lam, clean):
    # 1 lambda line sampled every 0.5 lambda: M = 3 i.i.d. gains
    tc = TrialConfig(choose_orientation(linear_path(1.0 * lam)), 0.5 * lam, clean, correlation="identity")
    stats = monte_carlo(tc, 20000, 1)
    assert stats.M == 3
    assert abs(stats.mean_power - harmonic(3)) <= 3.5 * stats.stderr_power


def test_positioning_at_path_end(lam, clean):
    path = choose_orientation(linear_path(1.0 * lam))
    tc = TrialConfig(path, 0.05 * lam, clean)
    batch = simulate_trials(tc, 500, 3)
    at_end = batch.index == batch.M - 1
    assert at_end.any()
    np.testing.assert_array_equal(batch.positioning_distance[at_end], 0.0)
    e = EnergyModel()
    np.testing.assert_allclose(batch.energy[at_end], 2 * e.start_cost + e.friction_force * path.length, rtol=1e-15)


def test_energy_decomposition(lam, noisy):
    path = circular_path(1.3 * lam)
    e = EnergyModel(1.5, 0.4, 2.0)
    batch = simulate_trials(TrialConfig(path, 0.05 * lam, noisy, e), 300, 8)
    np.testing.assert_allclose(
        batch.energy, 2 * e.start_cost + e.friction_force * (path.length + batch.positioning_distance), rtol=1e-14
    )
    np.testing.assert_allclose(batch.positioning_distance, np.linalg.norm(batch.q_opt - path.end, axis=1), rtol=1e-14)


@settings(max_examples=25, deadline=None)
@given(
    mass=st.floats(0.1, 10.0),
    speed=st.floats(0.05, 3.0),
    friction=st.floats(0.01, 5.0),
    length=st.floats(0.2, 3.0),
    family=st.sampled_from(["linear", "circular"]),
    seed=st.integers(0, 2**63),
)
def test_energy_decomposition_property(mass, speed, friction, length, family, seed):
    lam = 0.1402
    path = choose_orientation(linear_path(length * lam)) if family == "linear" else circular_path(length * lam)
    e = EnergyModel(mass, speed, friction)
    cfg = SmootherConfig(0.3828 * lam, NoiseModel.from_snr_db(10.0), lam)
    batch = simulate_trials(TrialConfig(path, 0.05 * lam, cfg, e), 20, seed)
    expected = 2 * e.start_cost + friction * (path.length + batch.positioning_distance)
    np.testing.assert_allclose(batch.energy, expected, rtol=1e-13, atol=1e-15)


def test_power_below_iid_bound(lam, clean):
    for path in (choose_orientation(linear_path(1.0 * lam)), circular_path(1.0 * lam)):
        stats = monte_carlo(TrialConfig(path, 0.05 * lam, clean), 5000, 2)
        assert stats.mean_power <= harmonic(stats.M)


def test_noiseless_power_independent_of_radius(lam):
    path = choose_orientation(linear_path(1.2 * lam))
    runs = [
        monte_carlo(TrialConfig(path, 0.05 * lam, SmootherConfig(d * lam, NoiseModel(), lam)), 3000, 4)
        for d in (0.3, 0.3828, 1.0)
    ]
    assert runs[0].mean_power == runs[1].mean_power == runs[2].mean_power


def test_stopping_single_point(lam, noisy):
    res = run_stopping_trial([[0.2, 0.3]], 4, noisy, EnergyModel(), seed=1)
    np.testing.assert_array_equal(res.q_opt, [0.2, 0.3])
    assert res.energy == pytest.approx(EnergyModel().start_cost)
    assert res.M == 1


def test_stopping_energy(lam, clean):
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    e = EnergyModel()
    for seed in range(10):
        res = run_stopping_trial(pts, 1, clean, e, seed)
        tour = 2.0
        assert res.energy == pytest.approx(3 * e.start_cost + e.friction_force * (tour + math.dist(pts[-1], res.q_opt)))


def test_stopping_far_points_harmonic(lam, clean):
    pts = np.array([[0.0, 0.0], [50 * lam, 0.0], [25 * lam, 50 * lam]])
    stats = monte_carlo(StoppingConfig(pts, 1, clean), 30000, 6)
    assert abs(stats.mean_power - harmonic(3)) <= 3.5 * stats.stderr_power


def test_stopping_averaging_recovers_noiseless(lam):
    pts = np.column_stack([np.arange(4) * 0.3 * lam, np.zeros(4)])
    low = SmootherConfig(0.1 * lam, NoiseModel.from_snr_db(-5.0), lam)
    ref = monte_carlo(StoppingConfig(pts, 1, replace(low, noise=NoiseModel())), 20000, 3).mean_power
    one = monte_carlo(StoppingConfig(pts, 1, low), 20000, 3).mean_power
    many = monte_carlo(StoppingConfig(pts, 2000, low), 20000, 3).mean_power
    assert one < many
    assert abs(many - ref) < abs(one - ref) / 10


def test_invalid_configs(lam, clean):
    with pytest.raises(ParameterError):
        StoppingConfig(np.zeros((0, 2)), 1, clean)
    with pytest.raises(ParameterError):
        TrialConfig(circular_path(1.0), 0.0, clean)
    with pytest.raises(ParameterError):
        TrialConfig(circular_path(1.0), 0.1, clean, correlation="white")


@pytest.fixture
def base():
    return ExperimentConfig(path=PathSection(family="mcp", L_p=1.0), noiseless=True, trials=3000, annealing=FAST)


def test_sweep_unknown_axis(base):
    with pytest.raises(ParameterError):
        sweep("speed", [1.0], base)
    with pytest.raises(ParameterError):
        sweep("delta", [], base)


def test_sweep_path_length_monotone(base):
    rows = sweep("path_length", [0.2, 0.4, 0.6, 0.8, 1.0, 1.2], base)
    powers = [s.mean_power for _, s in rows]
    for (_, a), (_, b) in zip(rows, rows[1:]):
        assert b.mean_power >= a.mean_power - 2 * a.stderr_power
    assert powers[-1] > powers[0]


def test_sweep_short_mcp_equals_linear(base):
    rows = sweep("path_family", ["linear", "mcp"], replace(base, path=replace(base.path, L_p=0.5)))
    (_, lp), (_, mcp) = rows
    assert abs(lp.mean_power - mcp.mean_power) <= lp.stderr_power
    assert mcp.M == lp.M


def test_sweep_common_random_numbers(base):
    exp = replace(base, path=replace(base.path, family="linear"))
    a = sweep("delta", [0.05, 0.05], exp)
    assert a[0][1] == a[1][1]
    b = sweep("delta", [0.05, 0.05], exp, common_random_numbers=False)
    assert b[0][1] != b[1][1]
