"""Continuous exploration paths.

Path points are joined by a C1 quadratic spline g(s), s in [0, N-1]:
segment j is Pi_j(t) = d_j + b_j t + c_j t^2 on t in [0, 1]. Interpolation and
derivative matching leave one vector of freedom, fixed here by making the first
segment the straight chord (b_1 = d_2 - d_1, c_1 = 0). Then

    c_j = d_{j+1} - d_j - b_j,    b_{j+1} = b_j + 2 c_j.

Arc length uses 32-node Gauss-Legendre quadrature on a 256-cell grid per
segment; the cumulative table doubles as the lookup for arc-length inversion.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .fading import as_points

GL_NODES = 32
TABLE_CELLS = 256
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_NODES)


def _speed(b, c, t):
    # |b + 2 c t| for broadcastable t
    vx = b[0] + 2.0 * c[0] * t
    vy = b[1] + 2.0 * c[1] * t
    return np.hypot(vx, vy)


def _gl(b, c, lo, hi):
    """Integral of the speed over [lo, hi] (arrays of intervals)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[..., None] + half[..., None] * _GL_X
    return half * np.sum(_GL_W * _speed(b, c, t), axis=-1)


@dataclass(frozen=True, eq=False)
class SplinePath:
    """Piecewise quadratic curve through ``knots``.

    ``coeffs`` has shape (N-1, 3, 2): rows are (a_j, b_j, c_j) with
    Pi_j(t) = a_j + b_j t + c_j t^2.
    """

    knots: np.ndarray
    coeffs: np.ndarray
    table: np.ndarray = field(repr=False)  # (N-1, TABLE_CELLS+1) cumulative arc length

    @property
    def n_segments(self):
        return self.coeffs.shape[0]

    @property
    def length(self):
        return float(self.table[-1, -1])

    @property
    def chord_length(self):
        return float(np.sum(np.linalg.norm(np.diff(self.knots, axis=0), axis=1)))

    @property
    def start(self):
        return self.knots[0]

    @property
    def end(self):
        return self.knots[-1]

    def evaluate(self, s):
        """g(s) for parameter values s in [0, N-1]."""
        s = np.asarray(s, dtype=float)
        j = np.clip(np.floor(s).astype(int), 0, self.n_segments - 1)
        t = s - j
        a, b, c = self.coeffs[j, 0], self.coeffs[j, 1], self.coeffs[j, 2]
        return a + b * t[..., None] + c * (t * t)[..., None]

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        j = np.clip(np.floor(s).astype(int), 0, self.n_segments - 1)
        t = s - j
        return self.coeffs[j, 1] + 2.0 * self.coeffs[j, 2] * t[..., None]

    def segment_derivatives(self, t):
        """dPi_j/dt at local parameter t, for every segment j."""
        return self.coeffs[:, 1] + 2.0 * t * self.coeffs[:, 2]

    def parameter_at(self, arc):
        """Spline parameter s with arc length ``arc`` from g(0).

        Bisection on the cumulative table cell, refined by Newton steps;
        tolerance 1e-10 of the total length.
        """
        L = self.length
        arc = float(np.clip(arc, 0.0, L))
        tol = 1e-10 * L
        flat = self.table[:, 1:].ravel()
        idx = int(np.searchsorted(flat, arc, side="left"))
        idx = min(idx, flat.size - 1)
        seg, cell = divmod(idx, TABLE_CELLS)
        lo_t = cell / TABLE_CELLS
        hi_t = (cell + 1) / TABLE_CELLS
        base = self.table[seg, cell]
        target = arc - base
        b, c = self.coeffs[seg, 1], self.coeffs[seg, 2]
        cell_len = self.table[seg, cell + 1] - base
        t = lo_t + (hi_t - lo_t) * (target / cell_len if cell_len > 0 else 0.0)
        lo, hi = lo_t, hi_t
        for _ in range(60):
            f = float(_gl(b, c, lo_t, t)) - target
            if abs(f) <= tol:
                break
            if f > 0:
                hi = t
            else:
                lo = t
            v = float(_speed(b, c, t))
            step = t - f / v if v > 0 else 0.5 * (lo + hi)
            t = step if lo < step < hi else 0.5 * (lo + hi)
        return seg + t

    def point_at(self, arc):
        return self.evaluate(self.parameter_at(arc))


def _build_table(coeffs):
    edges = np.linspace(0.0, 1.0, TABLE_CELLS + 1)
    tables = []
    offset = 0.0
    for a, b, c in coeffs:
        cells = _gl(b, c, edges[:-1], edges[1:])
        cum = np.concatenate([[0.0], np.cumsum(cells)]) + offset
        offset = cum[-1]
        tables.append(cum)
    return np.array(tables)


def fit_spline(D):
    """C1 quadratic spline through the path points (PathPoints or an (N, 2) array)."""
    pts = as_points(getattr(D, "points", D))
    n = pts.shape[0]
    if n < 2:
        raise ParameterError("spline needs at least two knots")
    chords = np.diff(pts, axis=0)
    if np.any(np.linalg.norm(chords, axis=1) == 0):
        raise ParameterError("consecutive knots coincide")
    coeffs = np.empty((n - 1, 3, 2))
    b = chords[0].copy()
    for j in range(n - 1):
        c = chords[j] - b
        coeffs[j] = pts[j], b, c
        b = b + 2.0 * c
    return SplinePath(pts.copy(), coeffs, _build_table(coeffs))


def arc_length(sp):
    return sp.length


@dataclass(frozen=True, eq=False)
class CircularPath:
    """Closed circle of circumference ``circumference``, traversed counterclockwise.

    Starts and ends at ``start``; the center sits one radius along +y.
    """

    circumference: float
    start: np.ndarray = field(default_factory=lambda: np.zeros(2))

    @property
    def radius(self):
        return self.circumference / (2.0 * math.pi)

    @property
    def center(self):
        return np.asarray(self.start, dtype=float) + np.array([0.0, self.radius])

    @property
    def length(self):
        return float(self.circumference)

    @property
    def end(self):
        return np.asarray(self.start, dtype=float)

    def point_at(self, arc):
        theta = -math.pi / 2 + arc / self.radius
        return self.center + self.radius * np.array([math.cos(theta), math.sin(theta)])


def linear_path(L_p):
    if not L_p > 0:
        raise ParameterError("path length must be positive")
    return fit_spline(np.array([[0.0, 0.0], [float(L_p), 0.0]]))


def circular_path(L_p):
    if not L_p > 0:
        raise ParameterError("path length must be positive")
    return CircularPath(float(L_p))


@dataclass(frozen=True, eq=False)
class OrientedPath:
    """A spline traversed from ``start`` to ``end_point``.

    When ``start_is_d1`` is False the spline is run backwards from d_N.
    """

    spline: SplinePath
    start_is_d1: bool
    end_point: np.ndarray

    @property
    def length(self):
        return self.spline.length

    @property
    def start(self):
        return self.spline.start if self.start_is_d1 else self.spline.end

    @property
    def end(self):
        return self.end_point

    def point_at(self, arc):
        if self.start_is_d1:
            return self.spline.point_at(arc)
        return self.spline.point_at(self.spline.length - arc)


def choose_orientation(sp):
    """End the exploration at whichever of d1, dN is closer on average to all knots.

    Ties (within 1e-12 relative) go to dN.
    """
    if isinstance(sp, OrientedPath):
        sp = sp.spline
    k = sp.knots
    mean_first = float(np.mean(np.linalg.norm(k - k[0], axis=1)))
    mean_last = float(np.mean(np.linalg.norm(k - k[-1], axis=1)))
    if mean_first < mean_last - 1e-12 * max(mean_first, mean_last):
        return OrientedPath(sp, False, k[0].copy())
    return OrientedPath(sp, True, k[-1].copy())


@dataclass(frozen=True)
class SamplingSet:
    points: np.ndarray
    spacing: float
    delta_requested: float

    @property
    def M(self):
        return self.points.shape[0]


def sample_count(length, delta):
    """M = ceil(length / delta) + 1, with ratios within 1e-9 of an integer snapped."""
    ratio = length / delta
    nearest = round(ratio)
    if abs(ratio - nearest) <= 1e-9 * max(1.0, ratio):
        ratio = nearest
    return int(math.ceil(ratio)) + 1


def sample_uniform(path, delta):
    """Sampling points spaced uniformly in arc length, first = start, last = end."""
    if not delta > 0:
        raise ParameterError("sampling distance must be positive")
    L = path.length
    M = sample_count(L, delta)
    if M <= 2:
        warnings.warn(
            f"sampling distance {delta:g} >= path length {L:g}; using the two endpoints",
            RuntimeWarning,
            stacklevel=2,
        )
        M = 2
    spacing = L / (M - 1)
    pts = np.array([path.point_at(k * spacing) for k in range(M)])
    pts[0] = path.start
    pts[-1] = path.end
    return SamplingSet(pts, spacing, float(delta))


def scale_to_length(sp, target):
    """Uniformly rescale a spline about d1 so its arc length equals ``target``.

    The spline fit is linear in the knots, so scaling the knots scales the
    curve and its arc length exactly.
    """
    factor = target / sp.length
    k = sp.knots[0] + (sp.knots - sp.knots[0]) * factor
    return fit_spline(k)
