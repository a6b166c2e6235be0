"""LMMSE smoothing of the exploration measurements.

The estimate at sampling point k combines the measurements inside the
Euclidean ball of radius d around it,

    h_hat_k = sum_{j in S_k(d)} a_{k,j} z_j,
    a_k = K (K^2 R_J + sigma_n^2 I)^{-1} r_{J,k},

which is the linear combiner with least mean square error under z = K h + n.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import NumericalError, ParameterError
from .fading import NoiseModel, correlation_matrix, pairwise_distances

# below this sigma_n^2 / K^2 the problem is treated as noiseless
NOISELESS_RATIO = 1e-12
# sampling points placed at exact multiples of the spacing must not drop out of
# S_k(d) through rounding
RADIUS_RTOL = 1e-9


@dataclass(frozen=True)
class SmootherConfig:
    d: float
    noise: NoiseModel
    lam: float

    def __post_init__(self):
        if not self.d > 0:
            raise ParameterError("truncation radius d must be positive")
        if not self.lam > 0:
            raise ParameterError("wavelength must be positive")

    @property
    def noiseless(self):
        return self.noise.noise_variance / self.noise.amplitude**2 < NOISELESS_RATIO


@dataclass(frozen=True)
class EstimateSet:
    estimates: np.ndarray
    neighborhood_sizes: np.ndarray


def _points(S):
    return getattr(S, "points", S)


def neighborhoods(S, d):
    """Index sets S_k(d) = {j : |p_k - p_j| <= d}, each sorted ascending.

    The comparison allows a relative slack of 1e-9 on d.
    """
    if not d > 0:
        raise ParameterError("truncation radius d must be positive")
    D = pairwise_distances(_points(S))
    # the diagonal is exactly 0, so k is always in its own set
    return [np.flatnonzero(row <= d * (1.0 + RADIUS_RTOL)) for row in D]


def lmmse_coefficients(S, k, J, cfg, R=None):
    """Smoother weights for point ``k`` over the indices ``J`` (aligned with J).

    In the noiseless limit the measurement at k alone gives zero error, so the
    weights are 1/K on k and 0 elsewhere; solving the regularized system there
    leaves errors of order sqrt(jitter) along the near-null eigenvectors.
    """
    J = np.asarray(J, dtype=int)
    pos = np.flatnonzero(J == k)
    if pos.size == 0:
        raise ParameterError(f"point {k} is not in its own neighborhood")
    K = cfg.noise.amplitude
    if cfg.noiseless:
        a = np.zeros(J.size)
        a[pos[0]] = 1.0 / K
        return a
    if R is None:
        RJ = correlation_matrix(_points(S)[J], cfg.lam).entries
        r = RJ[:, pos[0]]
    else:
        RJ = R[np.ix_(J, J)]
        r = R[J, k]
    A = K * K * RJ + cfg.noise.noise_variance * np.eye(J.size)
    try:
        return K * linalg.cho_solve(linalg.cho_factor(A, lower=True), r)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"LMMSE system for point {k} is not positive definite") from exc


def smoother_matrix(S, cfg, sets=None, R=None):
    """Dense M x M matrix A with h_hat = A z; row k holds a_k on S_k(d)."""
    pts = _points(S)
    M = len(pts)
    if sets is None:
        sets = neighborhoods(pts, cfg.d)
    if R is None and not cfg.noiseless:
        R = correlation_matrix(pts, cfg.lam).entries
    A = np.zeros((M, M))
    for k, J in enumerate(sets):
        A[k, J] = lmmse_coefficients(pts, k, J, cfg, R=R)
    return A


def theoretical_mse(S, cfg, sets=None):
    """Per-point LMMSE error 1 - K^2 r^T (K^2 R_J + sigma^2 I)^{-1} r."""
    pts = _points(S)
    if sets is None:
        sets = neighborhoods(pts, cfg.d)
    if cfg.noiseless:
        return np.zeros(len(pts))
    R = correlation_matrix(pts, cfg.lam).entries
    K = cfg.noise.amplitude
    out = np.empty(len(pts))
    for k, J in enumerate(sets):
        a = lmmse_coefficients(pts, k, J, cfg, R=R)
        out[k] = 1.0 - K * a @ R[J, k]
    return out


def smooth_all(z, S, cfg):
    z = np.asarray(z, dtype=complex)
    pts = _points(S)
    if z.shape[0] != len(pts):
        raise ParameterError(f"got {z.shape[0]} measurements for {len(pts)} sampling points")
    sets = neighborhoods(pts, cfg.d)
    A = smoother_matrix(pts, cfg, sets=sets)
    return EstimateSet(A @ z, np.array([len(J) for J in sets]))


def select_qopt(est, S):
    """Index and position of the largest |h_hat|; ties go to the lowest index."""
    values = est.estimates if isinstance(est, EstimateSet) else np.asarray(est)
    if values.size == 0:
        raise ParameterError("no estimates to select from")
    k = int(np.argmax(np.abs(values)))
    return k, np.asarray(_points(S))[k]
