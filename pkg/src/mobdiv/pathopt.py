"""Minimum-correlation path points.

N points with equal segment length L_p / (N - 1) are parametrized by the
heading of each segment. The cost is the sum of J0^2(2 pi |d_m - d_n| / lambda)
over all ordered pairs, diagonal included. Collinear points are optimal when
L_p / lambda <= z0 (J0^2(2 pi x) decreases up to its first zero); longer paths
go through simulated annealing started from the straight line.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .bessel import Z0, j0, j0_scalar
from .errors import ParameterError
from .fading import pairwise_distances
from .rng import stream

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AnnealingConfig:
    initial_temperature: float | None = None  # None: collinear cost / N
    cooling_factor: float = 0.97
    iterations_per_temperature: int = 200
    temperature_floor: float | None = None  # None: 1e-6 * initial temperature
    restarts: int = 8
    proposal_stddev_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.initial_temperature is not None and not self.initial_temperature > 0:
            raise ParameterError("initial_temperature must be positive")
        if not 0 < self.cooling_factor < 1:
            raise ParameterError("cooling_factor must lie in (0, 1)")
        if int(self.iterations_per_temperature) < 1:
            raise ParameterError("iterations_per_temperature must be a positive integer")
        if self.temperature_floor is not None and not self.temperature_floor > 0:
            raise ParameterError("temperature_floor must be positive")
        if int(self.restarts) < 1:
            raise ParameterError("restarts must be a positive integer")
        if not self.proposal_stddev_scale > 0:
            raise ParameterError("proposal_stddev_scale must be positive")


@dataclass(frozen=True)
class PathPoints:
    points: np.ndarray
    segment_length: float
    wavelength: float
    headings: np.ndarray | None = None

    @property
    def N(self):
        return self.points.shape[0]

    @property
    def L_p(self):
        return self.segment_length * (self.N - 1)


@dataclass(frozen=True)
class PathCostReport:
    cost: float
    iterations_used: int
    restarts_used: int
    annealed: bool


def angles_to_points(psi, L_p, N, origin=(0.0, 0.0)):
    psi = np.asarray(psi, dtype=float).ravel()
    if N < 2:
        raise ParameterError("need at least two path points")
    if not L_p > 0:
        raise ParameterError("path length must be positive")
    if psi.shape[0] != N - 1:
        raise ParameterError(f"expected {N - 1} heading angles, got {psi.shape[0]}")
    seg = L_p / (N - 1)
    steps = seg * np.column_stack([np.cos(psi), np.sin(psi)])
    pts = np.vstack([np.zeros(2), np.cumsum(steps, axis=0)]) + np.asarray(origin, dtype=float)
    return pts, seg


def make_path_points(psi, L_p, N, lam, origin=(0.0, 0.0)):
    pts, seg = angles_to_points(psi, L_p, N, origin)
    return PathPoints(pts, seg, float(lam), np.mod(np.asarray(psi, dtype=float), TWO_PI))


def path_cost(D, lam=None):
    """Sum over all (m, n) of J0^2(2 pi |d_m - d_n| / lam)."""
    if isinstance(D, PathPoints):
        pts, lam = D.points, D.wavelength
    else:
        pts = np.asarray(D, dtype=float)
    if lam is None:
        raise ParameterError("wavelength required for raw point arrays")
    c = j0(TWO_PI * pairwise_distances(pts) / lam)
    return float(np.sum(np.asarray(c) ** 2))


def is_straight_line_regime(L_p, lam):
    if not L_p > 0:
        raise ParameterError("path length must be positive")
    return L_p / lam <= Z0


def collinear_cost(N, L_p, lam):
    pts, _ = angles_to_points(np.zeros(N - 1), L_p, N)
    return path_cost(pts, lam)


@njit(cache=True, nogil=True)
def _anneal(psi, seg_over_lam, temps, iters, picks, steps, uniforms, T0):
    """Metropolis annealing over psi[1:], psi[0] stays fixed.

    Distances are in wavelengths. Moving heading j translates every point after
    j rigidly, so only the pairs straddling segment j change.
    Returns (best psi, best cost, iterations).
    """
    n_seg = psi.shape[0]
    N = n_seg + 1
    xs = np.zeros(N)
    ys = np.zeros(N)
    for j in range(n_seg):
        xs[j + 1] = xs[j] + seg_over_lam * math.cos(psi[j])
        ys[j + 1] = ys[j] + seg_over_lam * math.sin(psi[j])
    sq = np.empty((N, N))
    cost = 0.0
    for m in range(N):
        for n in range(N):
            d = math.hypot(xs[m] - xs[n], ys[m] - ys[n])
            v = j0_scalar(TWO_PI * d)
            sq[m, n] = v * v
            cost += v * v
    best = cost
    best_psi = psi.copy()
    new_sq = np.empty(N)
    k = 0
    for t in range(temps.shape[0]):
        T = temps[t]
        sd = steps[t]
        for _ in range(iters):
            j = picks[k]
            old = psi[j]
            new = (old + sd * uniforms[k, 0]) % TWO_PI
            dx = seg_over_lam * (math.cos(new) - math.cos(old))
            dy = seg_over_lam * (math.sin(new) - math.sin(old))
            delta = 0.0
            # points j+1..N-1 shift by (dx, dy); pairs (m <= j, n > j) change
            for n in range(j + 1, N):
                xn = xs[n] + dx
                yn = ys[n] + dy
                for m in range(j + 1):
                    d = math.hypot(xn - xs[m], yn - ys[m])
                    v = j0_scalar(TWO_PI * d)
                    delta += v * v - sq[m, n]
            delta *= 2.0
            accept = delta <= 0.0 or uniforms[k, 1] < math.exp(-delta / T)
            if accept:
                psi[j] = new
                for n in range(j + 1, N):
                    xs[n] += dx
                    ys[n] += dy
                for n in range(j + 1, N):
                    for m in range(j + 1):
                        d = math.hypot(xs[n] - xs[m], ys[n] - ys[m])
                        v = j0_scalar(TWO_PI * d)
                        sq[m, n] = v * v
                        sq[n, m] = v * v
                cost += delta
                if cost < best:
                    best = cost
                    best_psi[:] = psi
            k += 1
    return best_psi, best, k


def temperature_schedule(T0, cfg):
    floor = cfg.temperature_floor if cfg.temperature_floor is not None else 1e-6 * T0
    n = max(1, int(math.ceil(math.log(floor / T0) / math.log(cfg.cooling_factor))) + 1) if floor < T0 else 1
    return T0 * cfg.cooling_factor ** np.arange(n)


def _run_restart(r, N, L_p, lam, cfg, T0, temps):
    rng = stream(cfg.seed, "anneal", r)
    iters = int(cfg.iterations_per_temperature)
    total = temps.shape[0] * iters
    # free headings are psi[1:], i.e. indices 1..N-2
    picks = rng.integers(1, N - 1, size=total)
    uniforms = np.empty((total, 2))
    uniforms[:, 0] = rng.standard_normal(total)
    uniforms[:, 1] = rng.random(total)
    steps = cfg.proposal_stddev_scale * np.sqrt(temps / T0) * math.pi
    psi0 = np.zeros(N - 1)
    best_psi, _, used = _anneal(psi0, L_p / (N - 1) / lam, temps, iters, picks, steps, uniforms, T0)
    # rescore from scratch, the running sum accumulates rounding
    pts, _ = angles_to_points(best_psi, L_p, N)
    return best_psi, path_cost(pts, lam), used


def canonicalize(points):
    """Translate d1 to the origin and rotate d2 onto the +x axis."""
    pts = np.asarray(points, dtype=float) - points[0]
    if pts.shape[0] < 2:
        return pts
    ang = math.atan2(pts[1, 1], pts[1, 0])
    c, s = math.cos(-ang), math.sin(-ang)
    rot = np.array([[c, -s], [s, c]])
    out = pts @ rot.T
    out[0] = 0.0
    out[1, 1] = 0.0
    return out


def optimize_path(N, L_p, lam, cfg=None, workers=1):
    """Minimum-correlation path points for ``N`` points and length ``L_p``.

    Returns ``(PathPoints, PathCostReport)``. The best configuration across
    restarts wins, ties going to the lowest restart index; the collinear start
    is always a candidate, so the result never costs more than a straight line.
    """
    cfg = cfg or AnnealingConfig()
    if N < 2:
        raise ParameterError("need at least two path points")
    if not L_p > 0:
        raise ParameterError("path length must be positive")
    if not lam > 0:
        raise ParameterError("wavelength must be positive")
    straight = np.zeros(N - 1)
    base = collinear_cost(N, L_p, lam)
    if N <= 2 or is_straight_line_regime(L_p, lam):
        return make_path_points(straight, L_p, N, lam), PathCostReport(base, 0, 0, False)

    T0 = cfg.initial_temperature if cfg.initial_temperature is not None else base / N
    temps = temperature_schedule(T0, cfg)
    restarts = range(int(cfg.restarts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _run_restart(r, N, L_p, lam, cfg, T0, temps), restarts))
    else:
        results = [_run_restart(r, N, L_p, lam, cfg, T0, temps) for r in restarts]

    best_psi, best_cost, used = straight, base, 0
    for psi, cost, n in results:
        used += n
        if cost < best_cost:
            best_psi, best_cost = psi, cost
    pts, seg = angles_to_points(best_psi, L_p, N)
    pts = canonicalize(pts)
    psi = np.mod(np.arctan2(np.diff(pts[:, 1]), np.diff(pts[:, 0])), TWO_PI)
    D = PathPoints(pts, seg, float(lam), psi)
    return D, PathCostReport(path_cost(D), used, len(results), True)
