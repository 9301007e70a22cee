"""Single-cavity-mode optomechanical model of a LIGO-like interferometer.

Intracavity quadratures obey, with ``d/dt -> -i w``,

    dX/dt = -gamma X - Delta Y + sqrt(2 gamma) X_in
    dY/dt = -gamma Y + Delta X + sqrt(2 gamma) Y_in + g q

and leave as ``X_out = sqrt(2 gamma) X - X_in``, ``Y_out = sqrt(2 gamma) Y - Y_in``.
The field force on the test mass is ``F = hbar g X``.  ``Z1`` is the outgoing
amplitude quadrature and ``Z2`` the outgoing phase quadrature.

The differential test mass responds with ``chi_qq = -4 / (M w^2)``; closing the
loop between field and mass gives the detector-level observables.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .constants import C, HBAR
from .errors import DomainError, SingularLoopError, ValidationError
from .response import INPUT_AMPLITUDE, INPUT_PHASE, ObservableModes, Susceptibility, linear_combination

SINGULAR_LOOP_TOL = 1e-9


@dataclass(frozen=True)
class InterferometerParams:
    """Physical parameters (SI, angular frequencies in rad/s)."""

    mass: float
    arm_length: float
    power: float
    laser_omega: float
    detuning: float
    gamma: float
    c: float = C
    hbar: float = HBAR

    def __post_init__(self):
        checks = [
            ("mass", self.mass > 0),
            ("arm_length", self.arm_length > 0),
            ("power", self.power >= 0),
            ("gamma", self.gamma > 0),
            ("laser_omega", self.laser_omega > 0),
            ("laser_omega - detuning", self.laser_omega - self.detuning > 0),
            ("c", self.c > 0),
            ("hbar", self.hbar > 0),
        ]
        for name, ok in checks:
            value = getattr(self, name, None)
            if not ok or (value is not None and np.isnan(value)):
                raise ValidationError(f"invalid interferometer parameter {name}")
        if not np.isfinite(self.detuning):
            raise ValidationError("invalid interferometer parameter detuning")

    @classmethod
    def fig3(cls, detuning_hz=0.0, **overrides):
        """Reference LIGO-like parameters with a chosen detuning in Hz."""
        kw = dict(
            mass=40.0,
            arm_length=4000.0,
            power=800e3,
            laser_omega=2 * np.pi * 3e14,
            detuning=2 * np.pi * detuning_hz,
            gamma=2 * np.pi * 100.0,
        )
        kw.update(overrides)
        return cls(**kw)

    @property
    def omega_cav(self):
        return self.laser_omega - self.detuning

    @cached_property
    def coupling(self):
        """``g = 2 sqrt(P_cav w_cav / (hbar L c))``."""
        return 2 * np.sqrt(self.power * self.omega_cav / (self.hbar * self.arm_length * self.c))


def _check_omega(omega):
    omega = np.asarray(omega, dtype=np.float64)
    if np.any(omega == 0):
        raise DomainError("response functions are undefined at omega = 0")
    return omega


@dataclass(frozen=True)
class TestMass:
    mass: float

    def susceptibility(self, omega):
        omega = _check_omega(omega)
        return -4.0 / (self.mass * omega**2)


def chi_ff_closed_form(params, omega):
    """``hbar g^2 Delta / ((w - Delta + i gamma)(w + Delta + i gamma))``."""
    omega = np.asarray(omega, dtype=np.float64)
    d, gam = params.detuning, params.gamma
    return params.hbar * params.coupling**2 * d / ((omega - d + 1j * gam) * (omega + d + 1j * gam))


@dataclass(frozen=True)
class FieldSolution:
    """Field-level mode values and susceptibilities at a set of frequencies."""

    omega: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    force: np.ndarray
    chi_ff: np.ndarray
    chi_z1f: np.ndarray
    chi_z2f: np.ndarray


def _intracavity_transfer(params, omega):
    """``(n, 2, 3)`` response of (X, Y) to unit (X_in, Y_in, q)."""
    # [[a, D], [-D, a]] [X, Y]^T = rhs with a = gamma - i w, inverted explicitly:
    # conj-symmetric inputs then give bitwise conj-symmetric outputs, so
    # spectra that vanish analytically vanish exactly.
    omega = _check_omega(omega).ravel()
    a = params.gamma - 1j * omega
    d = params.detuning
    det = a * a + d * d
    inv = np.empty(omega.shape + (2, 2), dtype=np.complex128)
    inv[:, 0, 0] = a / det
    inv[:, 0, 1] = -d / det
    inv[:, 1, 0] = d / det
    inv[:, 1, 1] = a / det
    k = np.sqrt(2 * params.gamma)
    rhs = np.zeros((2, 3))
    rhs[0, 0] = k
    rhs[1, 1] = k
    rhs[1, 2] = params.coupling
    return inv @ rhs


def cavity_field_solve(params, omega):
    """Solve the cavity equations of motion at ``omega`` (rad/s, nonzero)."""
    omega = _check_omega(omega)
    shape = omega.shape
    t = _intracavity_transfer(params, omega)
    k = np.sqrt(2 * params.gamma)
    # rows: X, Y ; columns: X_in, Y_in, q
    x_in, y_in = INPUT_AMPLITUDE(0.0), INPUT_PHASE(0.0)
    x_mode = t[:, 0, 0] * x_in + t[:, 0, 1] * y_in
    y_mode = t[:, 1, 0] * x_in + t[:, 1, 1] * y_in
    hg = params.hbar * params.coupling
    return FieldSolution(
        omega=omega,
        z1=(k * x_mode - x_in).reshape(shape),
        z2=(k * y_mode - y_in).reshape(shape),
        force=(hg * x_mode).reshape(shape),
        chi_ff=(hg * t[:, 0, 2]).reshape(shape),
        chi_z1f=(k * t[:, 0, 2]).reshape(shape),
        chi_z2f=(k * t[:, 1, 2]).reshape(shape),
    )


@dataclass(frozen=True)
class FieldModel:
    """Field-level observables and susceptibilities as evaluators."""

    params: InterferometerParams
    z1: ObservableModes
    z2: ObservableModes
    force: ObservableModes
    chi_ff: Susceptibility
    chi_z1f: Susceptibility
    chi_z2f: Susceptibility


def build_field(params):
    def pick(name):
        return lambda w: getattr(cavity_field_solve(params, w), name)

    return FieldModel(
        params=params,
        z1=ObservableModes(pick("z1"), "", "Z1_field"),
        z2=ObservableModes(pick("z2"), "", "Z2_field"),
        force=ObservableModes(pick("force"), "N", "F_field"),
        chi_ff=Susceptibility(pick("chi_ff"), "F_field", "F_field", "N/m"),
        chi_z1f=Susceptibility(pick("chi_z1f"), "F_field", "Z1_field", "1/m"),
        chi_z2f=Susceptibility(pick("chi_z2f"), "F_field", "Z2_field", "1/m"),
    )


@dataclass(frozen=True)
class DetectorAssembly:
    """Closed-loop detector: field observables plus test-mass feedback.

    ``F = F_field / (1 - chi_qq chi_FF_field)`` and
    ``Z = Z_field + chi_ZF_field chi_qq F_field / (1 - chi_qq chi_FF_field)``.
    Every evaluator raises :class:`SingularLoopError` where the loop factor
    is below ``SINGULAR_LOOP_TOL`` in magnitude.
    """

    params: InterferometerParams
    test_mass: TestMass
    field: FieldModel
    loop_factor: Callable[[np.ndarray], np.ndarray]
    detector_f: ObservableModes
    detector_z1: ObservableModes
    detector_z2: ObservableModes
    chi_z1f: Susceptibility
    chi_z2f: Susceptibility
    chi_ff: Susceptibility
    chi_qq_eff: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def chi_zf(self, theta, omega):
        """Detector signal response of the readout ``Z1 sin(theta) + Z2 cos(theta)``."""
        return np.sin(theta) * self.chi_z1f(omega) + np.cos(theta) * self.chi_z2f(omega)


def close_loop(field_model, test_mass):
    chi_ff = field_model.chi_ff

    def loop(omega):
        omega = np.asarray(omega, dtype=np.float64)
        value = 1 - test_mass.susceptibility(omega) * chi_ff(omega)
        bad = np.abs(value) < SINGULAR_LOOP_TOL
        if np.any(bad):
            raise SingularLoopError(np.asarray(omega)[bad].ravel()[0])
        return value

    def backaction_gain(chi_zf):
        return lambda w: chi_zf(w) * test_mass.susceptibility(w) / loop(w)

    f_field = field_model.force
    params = field_model.params
    return DetectorAssembly(
        params=params,
        test_mass=test_mass,
        field=field_model,
        loop_factor=loop,
        detector_f=linear_combination([(lambda w: 1 / loop(w), f_field)], "N", "F"),
        detector_z1=linear_combination(
            [(1.0, field_model.z1), (backaction_gain(field_model.chi_z1f), f_field)], "", "Z1"),
        detector_z2=linear_combination(
            [(1.0, field_model.z2), (backaction_gain(field_model.chi_z2f), f_field)], "", "Z2"),
        chi_z1f=Susceptibility(lambda w: field_model.chi_z1f(w) / loop(w), "F", "Z1", "1/m"),
        chi_z2f=Susceptibility(lambda w: field_model.chi_z2f(w) / loop(w), "F", "Z2", "1/m"),
        chi_ff=Susceptibility(lambda w: chi_ff(w) / loop(w), "F", "F", "N/m"),
        chi_qq_eff=lambda w: test_mass.susceptibility(w) / loop(w),
    )


def assemble_detector(params):
    """Field model for ``params`` closed through its differential test mass."""
    return close_loop(build_field(params), TestMass(params.mass))


def gw_signal_scale(params, h):
    """Displacement signal ``x = L_arm h`` from a dimensionless strain."""
    return params.arm_length * np.asarray(h, dtype=np.float64)
