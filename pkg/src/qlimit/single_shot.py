"""Single-shot Gaussian measurement toy model (hbar = 1, vacuum variance 1/2).

The probe is a pure squeezed Gaussian state of a pair ``(u, v)``; ``u`` plays the
role of the force observable ``F`` and ``v`` its conjugate.  A classical signal
``x`` displaces ``v``, and the readout ``Z = u sin(theta) + v cos(theta)`` then has
``chi_ZF = cos(theta)``::

    sigma_FF = S_uu,   sigma_ZF = sin S_uu + cos S_uv,
    sigma_ZZ = sin^2 S_uu + 2 sin cos S_uv + cos^2 S_vv.

The covariance is ``R(phi) diag(e^{2r}, e^{-2r}) R(phi)^T / 2``, so ``phi`` turns the
anti-squeezed axis away from ``u``.  The uncorrelated readout obeys
``tan(theta*) = -S_uv / S_uu``.  Multiply by ``hbar`` (variances) or ``hbar^2``
(error bounds) to return to physical units.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import BlindQuadratureError, ValidationError

CHUNK = 1 << 16


@dataclass(frozen=True)
class SingleShotState:
    r: float
    phi: float
    sigma: np.ndarray

    @property
    def sigma_ff(self):
        return float(self.sigma[0, 0])

    @property
    def qcrb(self):
        return 1.0 / (4.0 * self.sigma_ff)


def covariance(r, phi):
    """Squeezed-state covariance of ``(u, v)``."""
    r, phi = float(r), float(phi)
    if not np.isfinite(r) or r < 0:
        raise ValidationError(f"squeeze factor r must be finite and >= 0, got {r!r}")
    if not np.isfinite(phi):
        raise ValidationError(f"squeeze angle phi must be finite, got {phi!r}")
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    c2, s2 = np.cos(2 * phi), np.sin(2 * phi)
    # closed form of the rotation product; keeps det = 1/4 to rounding
    sigma = 0.5 * np.array([[ch + c2 * sh, s2 * sh], [s2 * sh, ch - c2 * sh]])
    sigma.setflags(write=False)
    return SingleShotState(r, phi, sigma)


def sigma_zz(state, theta):
    s, c = np.sin(theta), np.cos(theta)
    m = state.sigma
    return s * s * m[0, 0] + 2 * s * c * m[0, 1] + c * c * m[1, 1]


def sigma_zf(state, theta):
    return np.sin(theta) * state.sigma[0, 0] + np.cos(theta) * state.sigma[0, 1]


def sigma_xx(state, theta):
    """Analytic error of the linear estimator ``Z / cos(theta)``."""
    c = np.cos(theta)
    if np.any(c == 0):
        raise BlindQuadratureError("cos(theta) = 0: the readout carries no signal")
    return sigma_zz(state, theta) / (c * c)


def optimal_angle(state):
    """Readout angle in ``(-pi/2, pi/2)`` uncorrelated with ``u``."""
    theta = float(np.arctan2(-state.sigma[0, 1], state.sigma[0, 0]))
    assert np.cos(theta) > 0, "optimal readout is never blind for finite r"
    return theta


@dataclass(frozen=True)
class SingleShotResult:
    theta_used: float
    x_true: float
    n_samples: int
    mse: float
    stderr_mse: float
    qcrb: float


def _chunk_sums(child, size, chol, sin_cos, x_true):
    # joint (u, v) draw; the signal displaces v
    uv = np.random.default_rng(child).standard_normal((size, 2)) @ chol.T
    z = uv @ sin_cos + sin_cos[1] * x_true
    return _kernels.squared_error_sums(z, sin_cos[1], x_true)


def mc_estimate(state, theta, x_true, n_samples, seed, workers=1):
    """Sample ``(u, v)`` from the state, read ``Z`` at ``theta``, score ``Z / cos(theta)``.

    ``theta="opt"`` selects :func:`optimal_angle`.  Samples come in fixed
    chunks of ``CHUNK`` with one ``SeedSequence`` child per chunk, so the
    result depends on ``seed`` only, not on ``workers``.
    """
    if isinstance(theta, str):
        if theta != "opt":
            raise ValidationError(f"theta must be a number or 'opt', got {theta!r}")
        theta = optimal_angle(state)
    theta, x_true = float(theta), float(x_true)
    if int(n_samples) != n_samples or n_samples < 2:
        raise ValidationError(f"n_samples must be an integer >= 2, got {n_samples!r}")
    n_samples = int(n_samples)
    gain = np.cos(theta)
    if gain == 0:
        raise BlindQuadratureError("cos(theta) = 0: the readout carries no signal")

    chol = np.linalg.cholesky(state.sigma)
    sin_cos = np.array([np.sin(theta), gain])
    sizes = [CHUNK] * (n_samples // CHUNK)
    if n_samples % CHUNK:
        sizes.append(n_samples % CHUNK)
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    args = [(ch, sz, chol, sin_cos, x_true) for ch, sz in zip(children, sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            parts = list(pool.map(lambda a: _chunk_sums(*a), args))
    else:
        parts = [_chunk_sums(*a) for a in args]

    s2 = sum(p[0] for p in parts)
    s4 = sum(p[1] for p in parts)
    mse = s2 / n_samples
    var = max(s4 / n_samples - mse * mse, 0.0) * n_samples / (n_samples - 1)
    stderr = float(np.sqrt(var / n_samples))
    return SingleShotResult(theta_used=theta, x_true=x_true, n_samples=n_samples,
                            mse=float(mse), stderr_mse=stderr, qcrb=state.qcrb)
