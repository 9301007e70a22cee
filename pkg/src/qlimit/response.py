"""Mode-function representation of field observables and their spectra.

A Hermitian observable of a linear detector driven by an ingoing continuum
field ``d`` is written in the frequency domain as

    A(w) = a(w) d(w) + conj(a(-w)) d^dagger(-w),

so it is fully described by the single complex function ``a = c_plus``.  The
``d^dagger`` coefficient is always derived from it, which makes the
Hermiticity relation ``c_minus(w) = conj(c_plus(-w))`` hold by construction.

Fourier convention is ``f(w) = int e^{+i w t} f(t) dt``.  All functions are
vectorised over ``omega`` (rad/s) and return arrays of the same shape.
"""
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .constants import HBAR

Coefficient = Union[complex, float, Callable[[np.ndarray], np.ndarray]]


def _as_omega(omega):
    return np.asarray(omega, dtype=np.float64)


@dataclass(frozen=True)
class ObservableModes:
    """Observable given by its coefficient ``c_plus(w)`` on ``d(w)``.

    ``c_plus`` must accept a float array of angular frequencies (positive and
    negative) and return complex values of the same shape.
    """

    c_plus: Callable[[np.ndarray], np.ndarray]
    unit: str = ""
    label: str = ""

    def __call__(self, omega):
        omega = _as_omega(omega)
        return np.broadcast_to(np.asarray(self.c_plus(omega), dtype=np.complex128), omega.shape)

    def c_minus(self, omega):
        """Coefficient of ``d^dagger(-w)``."""
        return np.conj(self(-_as_omega(omega)))

    def scaled(self, factor, unit=None, label=None):
        return linear_combination([(factor, self)], unit=self.unit if unit is None else unit,
                                  label=label or self.label)


def constant_modes(value, unit="", label=""):
    """Frequency-independent mode function, e.g. an input quadrature."""
    value = complex(value)
    return ObservableModes(lambda w: np.full(np.shape(w), value, dtype=np.complex128), unit, label)


def _coefficient(coef, omega):
    if callable(coef):
        return np.asarray(coef(omega), dtype=np.complex128)
    return complex(coef)


def linear_combination(terms, unit="", label=""):
    """``sum_k coef_k(w) * A_k`` for ``terms = [(coef_k, A_k), ...]``.

    Coefficients may be constants or callables of omega; for the result to be
    Hermitian each must obey ``coef(-w) = conj(coef(w))`` (true for real
    constants and for transfer functions of real kernels).
    """
    terms = tuple(terms)

    def c_plus(omega):
        out = np.zeros(np.shape(omega), dtype=np.complex128)
        for coef, modes in terms:
            out = out + _coefficient(coef, omega) * modes(omega)
        return out

    return ObservableModes(c_plus, unit, label)


def quadrature(z1, z2, theta, label=""):
    """Readout ``Z(theta) = Z1 sin(theta) + Z2 cos(theta)``."""
    return linear_combination([(np.sin(theta), z1), (np.cos(theta), z2)], unit=z2.unit,
                              label=label or f"Z({theta:.6g})")


INPUT_AMPLITUDE = constant_modes(1 / np.sqrt(2), label="X_in")
INPUT_PHASE = constant_modes(-1j / np.sqrt(2), label="Y_in")


@dataclass(frozen=True)
class SpectrumValue:
    """Unsymmetrised pair ``S_AB(w)``, ``S_BA(-w)`` and their mean."""

    s_unsym_pos: np.ndarray
    s_unsym_neg: np.ndarray
    s_sym: np.ndarray
    units: str = ""

    @classmethod
    def from_parts(cls, pos, neg, units=""):
        pos = np.asarray(pos, dtype=np.complex128)
        neg = np.asarray(neg, dtype=np.complex128)
        return cls(pos, neg, (pos + neg) / 2, units)


@dataclass(frozen=True)
class Susceptibility:
    """Linear response ``chi_{to <- from}(w)`` as a closed-form evaluator."""

    value: Callable[[np.ndarray], np.ndarray]
    from_label: str = ""
    to_label: str = ""
    units: str = ""

    def __call__(self, omega):
        omega = _as_omega(omega)
        return np.broadcast_to(np.asarray(self.value(omega), dtype=np.complex128), omega.shape)

    def reality_violation(self, omega):
        """``|chi(-w) - conj(chi(w))|``; zero for the transform of a real kernel."""
        omega = _as_omega(omega)
        return np.abs(self(-omega) - np.conj(self(omega)))


def vacuum_unsym_spectrum(a, b, omega):
    """``S_AB(w) = a(w) conj(b(w))`` in the vacuum of ``d``.

    For ``a is b`` the result is ``|a|^2`` so auto-spectra are exactly real.
    """
    omega = _as_omega(omega)
    av = a(omega)
    if a is b:
        return (np.abs(av) ** 2).astype(np.complex128)
    return av * np.conj(b(omega))


def symmetrized_spectrum(a, b, omega):
    """``S_AB(w)``, ``S_BA(-w)`` and ``(S_AB(w) + S_BA(-w)) / 2`` in vacuum."""
    omega = _as_omega(omega)
    pos = vacuum_unsym_spectrum(a, b, omega)
    neg = vacuum_unsym_spectrum(b, a, -omega)
    units = f"({a.unit})*({b.unit})/Hz" if (a.unit or b.unit) else "1/Hz"
    return SpectrumValue.from_parts(pos, neg, units)


def susceptibility_from_modes(z, f, omega, hbar=HBAR):
    """Response of output ``z`` to a drive coupled through ``f``.

    Uses the commutator form ``(i/hbar)[S_ZF(w) - S_FZ(-w)]`` which holds when
    ``z`` is simultaneously measurable (``chi_ZZ = chi_FZ = 0``).  The
    combination only involves commutators, so it does not depend on the state.
    """
    omega = _as_omega(omega)
    return (1j / hbar) * (z(omega) * np.conj(f(omega)) - f(-omega) * np.conj(z(-omega)))


_MINUS_SIGMA_Y = np.array([[0, 1j], [-1j, 0]])


def commutator_matrix(z1, z2, omega):
    """``M_kl = Z_k(w) conj(Z_l(w)) - conj(Z_k(-w)) Z_l(-w)``, shape ``omega.shape + (2, 2)``."""
    omega = _as_omega(omega)
    zp = np.stack([z1(omega), z2(omega)], axis=-1)
    zm = np.stack([z1(-omega), z2(-omega)], axis=-1)
    return zp[..., :, None] * np.conj(zp[..., None, :]) - np.conj(zm[..., :, None]) * zm[..., None, :]


def check_commutator_constraint(z1, z2, omega):
    """Largest entry-wise deviation of the output commutator from ``-sigma_y``."""
    dev = np.abs(commutator_matrix(z1, z2, omega) - _MINUS_SIGMA_Y)
    return dev.max(axis=(-2, -1))


def kubo_check(f, chi_ff, omega, hbar=HBAR):
    """``|Im chi_FF(w) - (S_FF(w) - S_FF(-w)) / (2 hbar)|``.

    ``chi_ff`` may be a :class:`Susceptibility`, a callable or precomputed values.
    """
    omega = _as_omega(omega)
    chi = chi_ff(omega) if callable(chi_ff) else np.asarray(chi_ff)
    s_pos = np.abs(f(omega)) ** 2
    s_neg = np.abs(f(-omega)) ** 2
    return np.abs(np.imag(chi) - (s_pos - s_neg) / (2 * hbar))
