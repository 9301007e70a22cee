import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlimit.response import (
    INPUT_AMPLITUDE,
    INPUT_PHASE,
    ObservableModes,
    SpectrumValue,
    check_commutator_constraint,
    constant_modes,
    kubo_check,
    linear_combination,
    susceptibility_from_modes,
    symmetrized_spectrum,
    vacuum_unsym_spectrum,
)
from qlimit.squeezing import SqueezeProfile, bogoliubov_transform, random_profiles

from oracles import CHI_FF_DETUNED_400HZ, S_FF_TUNED_100HZ

HBAR = 1.054571817e-34
finite = st.floats(-1e3, 1e3, allow_nan=False)
omegas = st.floats(1e-2, 1e5).flatmap(lambda w: st.sampled_from([w, -w]))


def random_modes(seed):
    """Smooth random mode function: a sum of complex poles."""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=3) + 1j * rng.normal(size=3)
    poles = rng.uniform(1.0, 100.0, 3)
    shifts = rng.uniform(-50, 50, 3)
    return ObservableModes(lambda w: sum(a / (p - 1j * (w - s)) for a, p, s in zip(amps, poles, shifts)))


def test_unit_mode_function_spectrum_is_one():
    one = constant_modes(1.0)
    assert np.all(vacuum_unsym_spectrum(one, one, np.array([-3.0, 1.0, 7.0])) == 1.0)


def test_input_quadrature_vacuum_variance():
    w = np.array([1.0, 10.0])
    assert np.allclose(vacuum_unsym_spectrum(INPUT_AMPLITUDE, INPUT_AMPLITUDE, w), 0.5, rtol=0, atol=1e-15)
    assert np.allclose(symmetrized_spectrum(INPUT_PHASE, INPUT_PHASE, w).s_sym, 0.5, rtol=0, atol=1e-15)


def test_hermitian_partner_is_derived():
    m = random_modes(3)
    w = np.linspace(-20, 20, 41)
    assert np.array_equal(m.c_minus(w), np.conj(m(-w)))


def test_symmetrized_definition():
    sv = SpectrumValue.from_parts(1.0, 0.0)
    assert sv.s_sym == 0.5


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), omegas)
def test_stored_consistency_is_exact(sa, sb, w):
    s = symmetrized_spectrum(random_modes(sa), random_modes(sb), w)
    assert s.s_sym == (s.s_unsym_pos + s.s_unsym_neg) / 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), omegas)
def test_auto_spectrum_real_nonnegative(seed, w):
    m = random_modes(seed)
    s = symmetrized_spectrum(m, m, w)
    for v in (s.s_unsym_pos, s.s_unsym_neg, s.s_sym):
        assert np.imag(v) == 0 and np.real(v) >= 0


def test_auto_spectra_nonnegative_in_random_squeezed_states(tuned):
    rng = np.random.default_rng(5)
    for state in random_profiles(100):
        w = 2 * np.pi * 10 ** rng.uniform(1, 4, 100) * rng.choice([-1, 1], 100)
        for obs in (tuned.field.z1, tuned.field.z2, tuned.field.force):
            sq = bogoliubov_transform(obs, state)
            s = symmetrized_spectrum(sq, sq, w)
            assert np.all(np.imag(s.s_sym) == 0) and np.all(np.real(s.s_sym) >= 0)


def test_tuned_force_spectrum_matches_closed_form(tuned):
    w = 2 * np.pi * 100.0
    s = vacuum_unsym_spectrum(tuned.field.force, tuned.field.force, w)
    assert s.real == pytest.approx(S_FF_TUNED_100HZ, rel=1e-14)
    assert s.imag == 0


def test_identical_real_modes_have_no_response():
    m = constant_modes(0.7)
    assert susceptibility_from_modes(m, m, np.array([1.0, 5.0]), HBAR).tolist() == [0, 0]


def test_phase_output_response_matches_classical_drive(tuned, omega_grid):
    from qlimit.interferometer import cavity_field_solve

    chi = susceptibility_from_modes(tuned.field.z2, tuned.field.force, omega_grid, HBAR)
    direct = cavity_field_solve(tuned.params, omega_grid).chi_z2f
    assert np.max(np.abs(chi - direct) / np.abs(direct)) < 1e-12


def test_force_self_response_matches_closed_form(detuned):
    chi = detuned.field.chi_ff(2 * np.pi * 400.0)
    assert abs(chi - CHI_FF_DETUNED_400HZ) / abs(CHI_FF_DETUNED_400HZ) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 2.0), st.floats(0, 2 * np.pi), st.floats(20.0, 5e3))
def test_susceptibility_ignores_squeezing(r, phi, f):
    from qlimit.interferometer import InterferometerParams, assemble_detector

    det = assemble_detector(InterferometerParams.fig3(400.0))
    state = SqueezeProfile(r=r, phi=phi)
    w = 2 * np.pi * f
    z, src = det.field.z2, det.field.force
    vac = susceptibility_from_modes(z, src, w, HBAR)
    sq = susceptibility_from_modes(bogoliubov_transform(z, state), bogoliubov_transform(src, state), w, HBAR)
    assert abs(sq - vac) <= 1e-12 * abs(vac) * np.exp(2 * r)


def test_canonical_input_pair_satisfies_commutator():
    w = np.array([-5.0, 0.5, 12.0])
    # zero up to the rounding of (1/sqrt 2)^2
    assert np.all(check_commutator_constraint(INPUT_AMPLITUDE, INPUT_PHASE, w) <= 4e-16)


def test_broken_normalization_violates_commutator_by_one():
    w = np.array([1.0, 2.0])
    z2 = linear_combination([(2.0, INPUT_PHASE)])
    assert np.allclose(check_commutator_constraint(INPUT_AMPLITUDE, z2, w), 1.0)


@pytest.mark.parametrize("which", ["tuned", "detuned"])
def test_cavity_outputs_are_canonical(which, request, omega_grid):
    det = request.getfixturevalue(which)
    assert np.max(check_commutator_constraint(det.field.z1, det.field.z2, omega_grid)) <= 1e-12


def test_kubo_symmetric_spectrum(tuned, omega_grid):
    assert np.max(kubo_check(tuned.field.force, tuned.field.chi_ff, omega_grid, HBAR)) == 0


def test_kubo_detuned(detuned, omega_grid):
    w = np.append(omega_grid, detuned.params.detuning)
    chi = detuned.field.chi_ff(w)
    viol = kubo_check(detuned.field.force, chi, w, HBAR)
    assert np.all(viol <= 1e-12 * np.maximum(1.0, np.abs(chi)))


def test_kubo_one_sided_spectrum():
    f = ObservableModes(lambda w: np.where(w > 0, 1.0 + 0j, 0j))
    w = np.array([1.0, 3.0])
    # Kubo fixes Im chi = S_FF(w) / (2 hbar) = 1/2 here
    assert np.all(kubo_check(f, np.full(2, 0.5j), w, 1.0) == 0)
    assert np.all(kubo_check(f, np.full(2, 1.0j), w, 1.0) == 0.5)


@given(finite, finite)
def test_linear_combination_of_real_constants_stays_hermitian(a, b):
    m = linear_combination([(a, INPUT_AMPLITUDE), (b, INPUT_PHASE)])
    w = np.array([2.0])
    assert np.array_equal(m.c_minus(w), np.conj(m(-w)))
