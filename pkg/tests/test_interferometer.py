import dataclasses

import numpy as np
import pytest

from qlimit.errors import DomainError, SingularLoopError, ValidationError
from qlimit.interferometer import (
    InterferometerParams,
    TestMass as Mass,
    assemble_detector,
    build_field,
    cavity_field_solve,
    chi_ff_closed_form,
    close_loop,
    gw_signal_scale,
)
from qlimit.response import Susceptibility

from oracles import (
    CHI_FF_DETUNED_400HZ_ABS,
    COUPLING_DETUNED_400HZ,
    COUPLING_TUNED,
    LOOP_BELOW_ONE_HZ,
    LOOP_MIN_HZ,
    LOOP_MIN_VALUE,
)


def test_coupling_constants():
    assert InterferometerParams.fig3(0.0).coupling == pytest.approx(COUPLING_TUNED, rel=1e-14)
    assert InterferometerParams.fig3(400.0).coupling == pytest.approx(COUPLING_DETUNED_400HZ, rel=1e-14)


def test_closed_form_self_response_value():
    p = InterferometerParams.fig3(400.0)
    assert abs(chi_ff_closed_form(p, 2 * np.pi * 400)) == pytest.approx(CHI_FF_DETUNED_400HZ_ABS, rel=1e-14)


@pytest.mark.parametrize("detuning_hz", [0.0, 50.0, 400.0, -250.0])
def test_dynamical_solve_matches_closed_form(detuning_hz, omega_grid):
    p = InterferometerParams.fig3(detuning_hz)
    solve = cavity_field_solve(p, omega_grid).chi_ff
    closed = chi_ff_closed_form(p, omega_grid)
    if detuning_hz == 0:
        assert np.all(solve == 0) and np.all(closed == 0)
    else:
        assert np.max(np.abs(solve / closed - 1)) <= 1e-12


def test_response_functions_are_real_kernels(detuned, omega_grid):
    for chi in (detuned.field.chi_ff, detuned.field.chi_z1f, detuned.field.chi_z2f,
                detuned.chi_ff, detuned.chi_z1f, detuned.chi_z2f):
        assert np.max(chi.reality_violation(omega_grid) / np.abs(chi(omega_grid))) <= 1e-14


def test_hermitian_detector_observables(detuned):
    w = 2 * np.pi * np.array([33.0, 500.0])
    for m in (detuned.detector_z1, detuned.detector_z2, detuned.detector_f):
        assert np.array_equal(m.c_minus(w), np.conj(m(-w)))


def test_phase_readout_without_backaction():
    # with an infinite mass only imprecision is left: (gamma^2 + w^2) / (4 gamma g^2)
    from qlimit.qcrb import detector_spectra, estimation_error

    p = InterferometerParams.fig3(0.0, mass=1e30)
    w = 2 * np.pi * np.array([10.0, 100.0, 3000.0])
    sigma = estimation_error(detector_spectra(assemble_detector(p), omega=w), 0.0)
    assert np.allclose(sigma, (p.gamma**2 + w**2) / (4 * p.gamma * p.coupling**2), rtol=1e-12)


def test_test_mass_response():
    m = Mass(40.0)
    assert m.susceptibility(2.0) == -4.0 / (40.0 * 4.0)
    with pytest.raises(DomainError):
        m.susceptibility(np.array([1.0, 0.0]))


def test_loop_factor_features(detuned):
    f = np.linspace(20.0, 500.0, 48001)
    loop = np.abs(detuned.loop_factor(2 * np.pi * f))
    inside = f[loop < 1]
    assert inside[0] == pytest.approx(LOOP_BELOW_ONE_HZ[0], abs=0.01)
    assert inside[-1] == pytest.approx(LOOP_BELOW_ONE_HZ[1], abs=0.01)
    assert np.all(np.diff(inside) < 0.011)
    assert f[np.argmin(loop)] == pytest.approx(LOOP_MIN_HZ, abs=0.01)
    assert loop.min() == pytest.approx(LOOP_MIN_VALUE, rel=1e-4)


def test_tuned_loop_is_open(tuned, omega_grid):
    assert np.all(tuned.loop_factor(omega_grid) == 1)


def test_singular_loop_is_reported():
    p = InterferometerParams.fig3(400.0)
    mass = Mass(p.mass)
    field = build_field(p)
    field = dataclasses.replace(field, chi_ff=Susceptibility(lambda w: 1 / mass.susceptibility(w)))
    det = close_loop(field, mass)
    with pytest.raises(SingularLoopError, match="omega = 6"):
        det.loop_factor(np.array([6.0]))
    with pytest.raises(SingularLoopError):
        det.chi_ff(np.array([6.0]))


@pytest.mark.parametrize("field, value", [("mass", 0.0), ("gamma", -1.0), ("power", -5.0),
                                          ("arm_length", np.nan), ("detuning", np.inf),
                                          ("laser_omega", 1.0)])
def test_parameter_validation(field, value):
    kw = {field: value}
    if field == "laser_omega":
        kw["detuning"] = 2.0
    with pytest.raises(ValidationError, match=field):
        InterferometerParams.fig3(0.0, **kw)


def test_signal_coupling():
    p = InterferometerParams.fig3()
    assert gw_signal_scale(p, 1e-21) == pytest.approx(4e-18)


def test_solve_rejects_zero_frequency():
    with pytest.raises(DomainError):
        cavity_field_solve(InterferometerParams.fig3(), np.array([0.0, 1.0]))
