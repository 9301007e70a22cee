"""Stationary pure Gaussian (multi-mode squeezed) states of the ingoing field.

A squeezed state only applies a Bogoliubov transformation to ``d``::

    a'(w) = a(w) cosh r_s(w) + exp(-i phi_s(w)) conj(a(-w)) sinh r_s(w)

and every spectrum in the squeezed state equals the vacuum spectrum of the
transformed mode functions.

With this sign convention a constant quadrature at angle ``phi_s / 2`` is the
*anti*-squeezed one (variance ``e^{2r}/2``); the squeezed quadrature sits at
``phi_s / 2 + pi / 2``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .response import ObservableModes, symmetrized_spectrum

FAMILIES = ("constant", "single_pole")


@dataclass(frozen=True)
class SqueezeProfile:
    """Squeeze factor and angle as even functions of frequency.

    ``family="constant"``: ``r_s = r``, ``phi_s = phi``.

    ``family="single_pole"``: with ``u = (w / corner)**2``,
    ``r_s = r / (1 + u)`` and ``phi_s = phi + 2 arctan(u)``; ``corner`` in rad/s.
    """

    r: float = 0.0
    phi: float = 0.0
    family: str = "constant"
    corner: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"squeeze.family must be one of {FAMILIES}, got {self.family!r}")
        if not np.isfinite(self.r) or self.r < 0:
            raise ValidationError(f"squeeze factor r must be finite and >= 0, got {self.r!r}")
        if not np.isfinite(self.phi):
            raise ValidationError(f"squeeze angle phi must be finite, got {self.phi!r}")
        if self.family == "single_pole" and not (np.isfinite(self.corner) and self.corner > 0):
            raise ValidationError(f"squeeze corner must be > 0 rad/s, got {self.corner!r}")

    @property
    def is_vacuum(self):
        return self.r == 0.0

    def r_s(self, omega):
        omega = np.asarray(omega, dtype=np.float64)
        if self.family == "constant":
            return np.full(omega.shape, float(self.r))
        return self.r / (1 + (omega / self.corner) ** 2)

    def phi_s(self, omega):
        omega = np.asarray(omega, dtype=np.float64)
        if self.family == "constant":
            return np.full(omega.shape, float(self.phi))
        return self.phi + 2 * np.arctan((omega / self.corner) ** 2)


VACUUM = SqueezeProfile()


def bogoliubov_transform(a, state):
    """Mode function of ``a`` seen through the squeezing of ``state``."""
    if not isinstance(state, SqueezeProfile):
        raise ValidationError("state must be a SqueezeProfile")
    if state.is_vacuum:
        return a

    def c_plus(omega):
        r = state.r_s(omega)
        return a(omega) * np.cosh(r) + np.exp(-1j * state.phi_s(omega)) * np.conj(a(-omega)) * np.sinh(r)

    return ObservableModes(c_plus, a.unit, a.label)


def mode_bound(a, state, omega):
    """``|a(w)| cosh r_s + |a(-w)| sinh r_s``: size of the terms summed in the transform.

    Spectra of squeezed modes are differences of terms this large, so it is
    the scale for judging their rounding error.
    """
    omega = np.asarray(omega, dtype=np.float64)
    if state.is_vacuum:
        return np.abs(a(omega))
    r = state.r_s(omega)
    return np.abs(a(omega)) * np.cosh(r) + np.abs(a(-omega)) * np.sinh(r)


def spectrum_in_state(a, b, state, omega):
    return symmetrized_spectrum(bogoliubov_transform(a, state), bogoliubov_transform(b, state), omega)


def random_profiles(n, seed=1729, r_max=2.0):
    """Reproducible draws with ``r in [0, r_max]``, ``phi in [0, 2 pi)``.

    Alternates constant and single-pole families; corners are log-uniform in
    2 pi x [10 Hz, 10 kHz].
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        r = rng.uniform(0.0, r_max)
        phi = rng.uniform(0.0, 2 * np.pi)
        corner = 2 * np.pi * 10 ** rng.uniform(1.0, 4.0)
        family = FAMILIES[k % 2]
        out.append(SqueezeProfile(r=r, phi=phi, family=family, corner=corner))
    return out
