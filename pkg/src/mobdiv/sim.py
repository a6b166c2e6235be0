"""Monte Carlo evaluation of continuous and stopping-point mobility diversity.

A CMDA trial explores the whole path, smooths the noisy measurements, moves to
the sampling point with the largest estimated gain and scores the *true*
|h(q_opt)|^2 there. Mechanical energy is a kinetic injection per start plus a
constant friction force times distance travelled.

Per-trial randomness is keyed by the trial seed alone, and trials are batched
in fixed-size chunks, so results are identical for any worker count.
"""
import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParameterError
from .estimation import SmootherConfig, neighborhoods, smoother_matrix
from .fading import NoiseModel, correlation_factor, correlation_matrix, draw_unit_gains, as_points
from .geometry import (
    SplinePath,
    choose_orientation,
    circular_path,
    fit_spline,
    linear_path,
    sample_uniform,
    scale_to_length,
)
from .pathopt import optimize_path
from .rng import complex_normal, derive_seed, stream

CHUNK = 2048
CORRELATIONS = ("jakes", "identity")
SWEEP_AXES = ("path_length", "delta", "snr_db", "d_radius", "path_family")
FAMILIES = ("mcp", "linear", "circular", "file")


@dataclass(frozen=True)
class EnergyModel:
    mass: float = 1.0
    cruise_speed: float = 0.5
    friction_force: float = 1.0

    def __post_init__(self):
        for name in ("mass", "cruise_speed", "friction_force"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"energy model {name} must be positive")

    @property
    def start_cost(self):
        return 0.5 * self.mass * self.cruise_speed**2


@dataclass(frozen=True)
class TrialConfig:
    """One CMDA run. ``correlation="identity"`` replaces the Jakes field with
    i.i.d. CN(0, 1) gains, a test hook with a closed-form answer."""

    path: object
    delta: float
    smoother: SmootherConfig
    energy: EnergyModel = field(default_factory=EnergyModel)
    seed: int = 0
    correlation: str = "jakes"

    def __post_init__(self):
        if not self.delta > 0:
            raise ParameterError("sampling distance delta must be positive")
        if self.correlation not in CORRELATIONS:
            raise ParameterError(f"unknown correlation model {self.correlation!r}")


@dataclass(frozen=True)
class StoppingConfig:
    points: np.ndarray
    measurements_per_stop: int
    smoother: SmootherConfig
    energy: EnergyModel = field(default_factory=EnergyModel)
    seed: int = 0
    correlation: str = "jakes"

    def __post_init__(self):
        if len(np.atleast_2d(self.points)) == 0 or np.size(self.points) == 0:
            raise ParameterError("stopping-point MDA needs at least one point")
        if int(self.measurements_per_stop) < 1:
            raise ParameterError("measurements_per_stop must be at least 1")
        if self.correlation not in CORRELATIONS:
            raise ParameterError(f"unknown correlation model {self.correlation!r}")


@dataclass(frozen=True)
class TrialResult:
    q_opt: np.ndarray
    index: int
    true_power: float
    energy: float
    positioning_distance: float
    M: int


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial outputs of a Monte Carlo run, in trial-index order."""

    q_opt: np.ndarray
    index: np.ndarray
    true_power: np.ndarray
    energy: np.ndarray
    positioning_distance: np.ndarray
    M: int
    path_length: float


@dataclass(frozen=True)
class SummaryStats:
    mean_power: float
    mean_energy: float
    stderr_power: float
    stderr_energy: float
    trials: int
    M: int = 0
    path_length: float = float("nan")

    def as_dict(self):
        return {
            "mean_power": self.mean_power,
            "stderr_power": self.stderr_power,
            "mean_energy": self.mean_energy,
            "stderr_energy": self.stderr_energy,
            "trials": self.trials,
            "M": self.M,
            "path_length_m": self.path_length,
        }


@dataclass(frozen=True, eq=False)
class _Scenario:
    points: np.ndarray
    factor: np.ndarray | None  # None: identity correlation
    smoother: np.ndarray
    amplitude: float
    noise_variance: float
    measurements: int
    starts: int
    travel: float
    end: np.ndarray
    start_cost: float
    friction: float
    path_length: float

    @property
    def M(self):
        return self.points.shape[0]


def _noise_of(smoother, per_measurement_variance):
    return replace(smoother, noise=NoiseModel(smoother.noise.amplitude, per_measurement_variance))


def _prepare(cfg):
    if isinstance(cfg, TrialConfig):
        path = cfg.path
        if isinstance(path, SplinePath):
            path = choose_orientation(path)
        S = sample_uniform(path, cfg.delta)
        pts = S.points
        starts, travel, end = 2, path.length, np.asarray(path.end, dtype=float)
        meas = 1
        smoother_cfg = cfg.smoother
        length = path.length
    else:
        pts = as_points(cfg.points)
        starts = pts.shape[0]
        travel = float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))
        end = pts[-1]
        meas = int(cfg.measurements_per_stop)
        # averaging n measurements divides the noise variance by n
        smoother_cfg = _noise_of(cfg.smoother, cfg.smoother.noise.noise_variance / meas)
        length = travel
    if cfg.correlation == "identity":
        factor = None
        R = np.eye(pts.shape[0])
    else:
        R = correlation_matrix(pts, smoother_cfg.lam).entries
        factor = correlation_factor(R)
    A = smoother_matrix(pts, smoother_cfg, sets=neighborhoods(pts, smoother_cfg.d), R=R)
    return _Scenario(
        points=pts,
        factor=factor,
        smoother=A,
        amplitude=cfg.smoother.noise.amplitude,
        noise_variance=cfg.smoother.noise.noise_variance,
        measurements=meas,
        starts=starts,
        travel=travel,
        end=end,
        start_cost=cfg.energy.start_cost,
        friction=cfg.energy.friction_force,
        path_length=length,
    )


def _run_chunk(sc, seeds):
    """Trials for ``seeds``; returns (index, power, energy, distance) arrays."""
    T, M = len(seeds), sc.M
    U = np.empty((T, M), dtype=complex)
    noise = np.zeros((T, M), dtype=complex)
    for i, s in enumerate(seeds):
        U[i] = draw_unit_gains(s, M)
        if sc.noise_variance > 0:
            w = complex_normal(stream(s, "noise"), (sc.measurements, M), sc.noise_variance)
            noise[i] = w.mean(axis=0)
    H = U if sc.factor is None else U @ sc.factor.T
    Z = sc.amplitude * H + noise
    est = Z @ sc.smoother.T
    # argmax returns the first maximum, i.e. ties go to the lowest index
    k = np.argmax(np.abs(est), axis=1)
    power = np.abs(H[np.arange(T), k]) ** 2
    dist = np.linalg.norm(sc.points[k] - sc.end, axis=1)
    energy = sc.starts * sc.start_cost + sc.friction * (sc.travel + dist)
    return k, power, energy, dist


def _single(cfg):
    sc = _prepare(cfg)
    k, power, energy, dist = _run_chunk(sc, [cfg.seed])
    return TrialResult(sc.points[k[0]].copy(), int(k[0]), float(power[0]), float(energy[0]), float(dist[0]), sc.M)


def run_cmda_trial(cfg):
    """Explore, smooth, pick q_opt, position. Reports the true |h(q_opt)|^2."""
    if not isinstance(cfg, TrialConfig):
        raise ParameterError("run_cmda_trial expects a TrialConfig")
    return _single(cfg)


def run_stopping_trial(points, measurements_per_stop, smoother, energy=None, seed=0, correlation="jakes"):
    cfg = StoppingConfig(as_points(points), measurements_per_stop, smoother, energy or EnergyModel(), seed, correlation)
    return _single(cfg)


def trial_seed(master_seed, index):
    return derive_seed(master_seed, "trial", index)


def simulate_trials(template, trials, master_seed, workers=1):
    """All per-trial results; trial i runs with seed ``trial_seed(master_seed, i)``."""
    if int(trials) < 1:
        raise ParameterError("need at least one trial")
    sc = _prepare(template)
    seeds = [trial_seed(master_seed, i) for i in range(int(trials))]
    chunks = [seeds[i : i + CHUNK] for i in range(0, len(seeds), CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _run_chunk(sc, c), chunks))
    else:
        parts = [_run_chunk(sc, c) for c in chunks]
    k, power, energy, dist = (np.concatenate(x) for x in zip(*parts))
    return TrialBatch(sc.points[k], k, power, energy, dist, sc.M, sc.path_length)


def summarize(batch):
    n = batch.true_power.size

    def se(x):
        return float(np.std(x, ddof=1) / np.sqrt(n)) if n > 1 else 0.0

    return SummaryStats(
        float(np.mean(batch.true_power)),
        float(np.mean(batch.energy)),
        se(batch.true_power),
        se(batch.energy),
        n,
        batch.M,
        batch.path_length,
    )


def monte_carlo(template, trials, master_seed, workers=1):
    return summarize(simulate_trials(template, trials, master_seed, workers))


# -- experiment-level plumbing shared by sweep and the command line ---------


@functools.lru_cache(maxsize=64)
def _cached_mcp(N, L_p, lam, annealing):
    D, report = optimize_path(N, L_p, lam, annealing)
    return D, report


def build_path(exp):
    """Exploration path for an experiment config (lengths there are in wavelengths)."""
    lam = exp.wavelength_m
    p = exp.path
    L = p.L_p * lam
    if p.family == "linear":
        return choose_orientation(linear_path(L))
    if p.family == "circular":
        return circular_path(L)
    if p.family == "mcp":
        D, _ = _cached_mcp(int(p.N), L, lam, exp.annealing)
        sp = fit_spline(D)
        if p.match_arc_length:
            sp = scale_to_length(sp, L)
        return choose_orientation(sp)
    if p.family == "file":
        from .pathio import load_path_json

        return choose_orientation(fit_spline(load_path_json(p.file)["knots"]))
    raise ParameterError(f"unknown path family {p.family!r}")


def smoother_config(exp):
    lam = exp.wavelength_m
    noise = NoiseModel.from_snr_db(None if exp.noiseless else exp.snr_db, exp.amplitude)
    return SmootherConfig(exp.smoother.d * lam, noise, lam)


def build_trial_config(exp, seed=0):
    return TrialConfig(
        path=build_path(exp),
        delta=exp.delta * exp.wavelength_m,
        smoother=smoother_config(exp),
        energy=exp.energy,
        seed=seed,
    )


def apply_axis(exp, axis, value):
    """Copy of ``exp`` with one sweep parameter set."""
    if axis == "path_length":
        return replace(exp, path=replace(exp.path, L_p=float(value)))
    if axis == "delta":
        return replace(exp, delta=float(value))
    if axis == "snr_db":
        if value is None or (isinstance(value, str) and value.lower() in ("inf", "noiseless")):
            return replace(exp, noiseless=True)
        v = float(value)
        if np.isinf(v):
            return replace(exp, noiseless=True)
        return replace(exp, snr_db=v, noiseless=False)
    if axis == "d_radius":
        return replace(exp, smoother=replace(exp.smoother, d=float(value)))
    if axis == "path_family":
        if value not in FAMILIES:
            raise ParameterError(f"unknown path family {value!r}")
        return replace(exp, path=replace(exp.path, family=value))
    raise ParameterError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def sweep(axis, values, base, common_random_numbers=True, workers=1, trials=None):
    """One SummaryStats per value of ``axis``.

    With common random numbers every value reuses the base master seed, so
    differences between rows are not inflated by independent noise.
    """
    if axis not in SWEEP_AXES:
        raise ParameterError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    values = list(values)
    if not values:
        raise ParameterError("sweep needs at least one value")
    n = int(trials if trials is not None else base.trials)
    rows = []
    for i, v in enumerate(values):
        exp = apply_axis(base, axis, v)
        seed = base.master_seed if common_random_numbers else derive_seed(base.master_seed, "sweep", i)
        rows.append((v, monte_carlo(build_trial_config(exp), n, seed, workers)))
    return rows

