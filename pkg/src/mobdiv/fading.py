"""Jakes spatial correlation and correlated Rayleigh channel realizations.

The small-scale fading gain h(p) is CN(0, 1) at every position, with
E[h(p) h*(q)] = J0(2 pi |p - q| / lambda). Measurements of a received tone of
amplitude K are z = K h + n with n ~ CN(0, sigma_n^2).
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .bessel import j0
from .errors import NumericalError, ParameterError
from .rng import complex_normal, stream

# global range of J0 on [0, inf)
J0_MIN = -0.40275939570255315

CLIP_LIMIT = -1e-8
FACTOR_JITTER = 1e-12


def _check_wavelength(lam):
    if not np.isfinite(lam) or lam <= 0:
        raise ParameterError(f"wavelength must be positive, got {lam!r}")


def as_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, 2)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ParameterError(f"expected an (n, 2) array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ParameterError("point coordinates must be finite")
    return pts


def pairwise_distances(points):
    pts = as_points(points)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


@dataclass(frozen=True)
class NoiseModel:
    """Received-tone amplitude ``amplitude`` (K) and noise variance ``noise_variance``."""

    amplitude: float = 1.0
    noise_variance: float = 0.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ParameterError("tone amplitude K must be positive")
        if not self.noise_variance >= 0:
            raise ParameterError("noise variance must be nonnegative")

    @classmethod
    def from_snr_db(cls, snr_db, amplitude=1.0):
        """SNR is taken as K^2 / sigma_n^2, since E|h|^2 = 1."""
        if snr_db is None or np.isinf(snr_db):
            return cls(amplitude, 0.0)
        return cls(amplitude, amplitude**2 / 10.0 ** (snr_db / 10.0))

    @property
    def snr(self):
        if self.noise_variance == 0:
            return np.inf
        return self.amplitude**2 / self.noise_variance


@dataclass(frozen=True)
class CorrelationMatrix:
    entries: np.ndarray
    points: np.ndarray = field(repr=False)
    wavelength: float = float("nan")

    @property
    def size(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class FieldRealization:
    gains: np.ndarray
    seed: int


def jakes_correlation(p, q, lam):
    """J0(2 pi |p - q| / lam) for two points (or broadcastable arrays of points)."""
    _check_wavelength(lam)
    diff = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    return j0(2.0 * np.pi * dist / lam)


def correlation_matrix(points, lam):
    _check_wavelength(lam)
    pts = as_points(points)
    if len(pts) == 0:
        raise ParameterError("correlation matrix needs at least one point")
    R = j0(2.0 * np.pi * pairwise_distances(pts) / lam)
    R = np.atleast_2d(R)
    # symmetric by construction of the distance matrix; pin the diagonal anyway
    np.fill_diagonal(R, 1.0)
    return CorrelationMatrix(R, pts, float(lam))


def _entries(R):
    return R.entries if isinstance(R, CorrelationMatrix) else np.atleast_2d(np.asarray(R, dtype=float))


def correlation_factor(R):
    """Lower-triangular L with L L^T equal to the PSD-repaired R.

    Eigenvalues down to -1e-8 are clipped to zero; anything more negative means
    the input is not a correlation matrix and is rejected. A 1e-12 diagonal
    jitter is added before the Cholesky factorization.
    """
    A = _entries(R)
    if A.shape[0] != A.shape[1]:
        raise ParameterError("correlation matrix must be square")
    A = 0.5 * (A + A.T)
    w, V = np.linalg.eigh(A)
    if w[0] < CLIP_LIMIT:
        raise NumericalError(
            f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e} < {CLIP_LIMIT:g}"
        )
    if w[0] < 0:
        A = (V * np.clip(w, 0.0, None)) @ V.T
    A = A + FACTOR_JITTER * np.eye(A.shape[0])
    try:
        return linalg.cholesky(A, lower=True)
    except linalg.LinAlgError as exc:
        cond = w[-1] / max(w[0], np.finfo(float).tiny)
        raise NumericalError(
            f"Cholesky failed after jitter (n={A.shape[0]}, eig range "
            f"[{w[0]:.3e}, {w[-1]:.3e}], cond ~ {cond:.3e})"
        ) from exc


def draw_unit_gains(seed, size):
    """The i.i.d. CN(0, 1) innovations behind ``sample_field``."""
    return complex_normal(stream(seed, "field"), size)


def draw_noise(seed, size, variance):
    return complex_normal(stream(seed, "noise"), size, variance)


def sample_field(R, seed, factor=None):
    """One correlated CN(0, R) realization, deterministic given ``seed``.

    ``factor`` lets callers reuse a precomputed ``correlation_factor(R)``.
    """
    L = correlation_factor(R) if factor is None else factor
    u = draw_unit_gains(seed, L.shape[0])
    return FieldRealization(L @ u, int(seed))


def observe(h, noise, seed):
    """Noisy tone measurements z = K h + n."""
    gains = h.gains if isinstance(h, FieldRealization) else np.asarray(h, dtype=complex)
    z = noise.amplitude * gains
    if noise.noise_variance > 0:
        z = z + draw_noise(seed, gains.shape[0], noise.noise_variance)
    return z
