"""Invariant suite behind ``qlimit verify``.

Every check reduces to a per-frequency residual that must stay at or below
its tolerance.  Margins that must be non-negative are reported negated, so
the report always shows "worst residual vs tolerance" and where it occurs.
"""
from dataclasses import dataclass

import numpy as np

from .interferometer import assemble_detector, cavity_field_solve, chi_ff_closed_form
from .qcrb import (
    bound_audit,
    detector_spectra,
    optimal_theta,
    qcrb,
    qcrb_field_form,
    readout_identity_residual,
    rmin_diagnostics,
)
from .response import check_commutator_constraint, kubo_check, susceptibility_from_modes
from .single_shot import covariance, optimal_angle, sigma_xx, sigma_zf, sigma_zz
from .squeezing import VACUUM, bogoliubov_transform, mode_bound
from .sweep import _loop_ok

IDENTITY_TOL = 1e-10
CLOSED_FORM_TOL = 1e-12
INEQUALITY_SLACK = 1e-9
GRID_TOL = 1e-6
RMIN_FLOOR = 1e-4


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tolerance: float
    f_hz: float
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        where = "-" if np.isnan(self.f_hz) else f"{self.f_hz:.6g} Hz"
        return f"{status}  {self.name:<34} worst={self.worst:.3e}  tol={self.tolerance:.1e}  at {where}"


@dataclass(frozen=True)
class VerifyReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def text(self):
        lines = [c.line() for c in self.checks]
        n_bad = sum(not c.passed for c in self.checks)
        lines.append(f"{len(self.checks) - n_bad}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"


def _result(name, residual, tol, f_hz):
    residual = np.asarray(residual, dtype=np.float64)
    if f_hz is None:
        f_hz = np.full(residual.shape, np.nan)
    defined = ~np.isnan(residual)
    if not np.any(defined):
        return CheckResult(name, 0.0, tol, float("nan"), True)
    r = np.where(defined, residual, -np.inf)
    i = int(np.argmax(r))
    # a non-finite residual is a failure, never a pass
    worst = float(residual.ravel()[i])
    return CheckResult(name, worst, tol, float(np.ravel(f_hz)[i]), bool(np.isfinite(worst) and worst <= tol))


def _rel(a, b, scale=None):
    scale = np.abs(b) if scale is None else scale
    return np.abs(a - b) / scale


def susceptibility_invariance(z, src, state, omega, hbar):
    """Relative change of ``chi_ZF`` from the commutator form when the state is squeezed.

    Relative to ``max(|chi_vac|, term size)``, the term size being the
    magnitude of the products summed in the squeezed commutator.
    """
    vac = susceptibility_from_modes(z, src, omega, hbar)
    sq = susceptibility_from_modes(bogoliubov_transform(z, state), bogoliubov_transform(src, state), omega, hbar)
    terms = (mode_bound(z, state, omega) * mode_bound(src, state, omega)
             + mode_bound(z, state, -omega) * mode_bound(src, state, -omega)) / hbar
    return np.abs(sq - vac) / np.maximum(np.abs(vac), terms)


def _physical_checks(config, f):
    params = config.detector.params()
    state = config.squeeze.profile()
    det = assemble_detector(params)
    omega = 2 * np.pi * f
    hbar = params.hbar
    out = []

    sol = cavity_field_solve(params, omega)
    closed = chi_ff_closed_form(params, omega)
    scale = np.maximum(np.abs(closed), hbar * params.coupling**2 / params.gamma * 1e-300)
    out.append(("chi_FF solve vs closed form", _rel(sol.chi_ff, closed, np.where(scale > 0, scale, 1.0)),
                CLOSED_FORM_TOL))

    out.append(("commutator constraint (field)",
                check_commutator_constraint(det.field.z1, det.field.z2, omega), CLOSED_FORM_TOL))
    # detector outputs carry the loop gain; compare against the size of their summed terms
    spec0 = detector_spectra(det, VACUUM, omega)
    b = spec0.bounds
    size = np.maximum.reduce([np.ones_like(f), b.z1**2, b.z2**2, b.z1_neg**2, b.z2_neg**2])
    out.append(("commutator constraint (detector)",
                check_commutator_constraint(det.detector_z1, det.detector_z2, omega) / size, CLOSED_FORM_TOL))

    chi = det.chi_ff(omega)
    s_scale = np.maximum(np.abs(det.detector_f(omega)) ** 2, np.abs(det.detector_f(-omega)) ** 2) / (2 * hbar)
    kubo = kubo_check(det.detector_f, chi, omega, hbar) / np.maximum.reduce([np.ones_like(f), np.abs(chi), s_scale])
    out.append(("Kubo formula", kubo, CLOSED_FORM_TOL))

    worst = np.zeros(f.shape)
    for z in (det.detector_z1, det.detector_z2, det.detector_f, det.field.z1, det.field.z2):
        for src in (det.detector_f, det.field.force):
            worst = np.maximum(worst, susceptibility_invariance(z, src, state, omega, hbar))
    out.append(("susceptibility squeeze invariance", worst, CLOSED_FORM_TOL))

    spec = detector_spectra(det, state, omega)
    out.append(("readout cross-spectrum identity", readout_identity_residual(spec), IDENTITY_TOL))
    bound = qcrb(spec, check=False)
    out.append(("QCRB two-path agreement", _rel(qcrb_field_form(spec), bound), CLOSED_FORM_TOL))

    audit = bound_audit(det, state, omega)
    out.append(("uncertainty relation equality", audit.uncertainty_residual, IDENTITY_TOL))
    out.append(("quantum-limit equality", audit.quantum_limit_residual, IDENTITY_TOL))
    out.append(("sigma >= QCRB", -audit.sigma_over_qcrb_margin, INEQUALITY_SLACK))
    out.append(("sigma_opt <= 2 QCRB", -audit.two_qcrb_margin, INEQUALITY_SLACK))
    out.append(("imprecision/backaction split", audit.decomposition_residual, IDENTITY_TOL))
    out.append(("backaction cancellation", audit.backaction_cancellation, IDENTITY_TOL))

    opt = optimal_theta(spec)
    out.append(("optimal angle grid cross-check", _rel(opt.sigma_grid, opt.sigma), GRID_TOL))
    out.append(("optimal angle beats grid", opt.sigma / opt.sigma_grid - 1, INEQUALITY_SLACK))
    if params.detuning == 0:
        out.append(("tuned QCRB attainment", _rel(opt.sigma, bound), GRID_TOL))

    rm = rmin_diagnostics(spec)
    half = hbar / 2
    out.append(("R_min <= hbar/2", rm.r_min_grid / half - 1, INEQUALITY_SLACK))
    # where |beta| = 1 the closed form is zero up to rounding; fall back to a
    # floor of 1e-4 hbar/2 (absolute error 1e-10 hbar/2 at GRID_TOL)
    denom = np.maximum(rm.r_min_closed, RMIN_FLOOR * half)
    out.append(("R_min grid vs closed form", np.abs(rm.r_min_grid - rm.r_min_closed) / denom, GRID_TOL))
    return out


def _single_shot_checks(config):
    ss = config.single_shot
    states = [covariance(r, phi) for r, phi in ((0.0, 0.0), (1.0, np.pi / 6), (2.0, np.pi / 3), (1.0, np.pi / 4))]
    states.append(covariance(ss.r, ss.phi))
    thetas = np.arange(64) * (np.pi / 64) - np.pi / 2 + np.pi / 128
    purity, heis, bound, attain, caption = [], [], [], [], []
    for st in states:
        m = st.sigma
        purity.append(abs(np.linalg.det(m) - 0.25))
        lhs = sigma_zz(st, thetas) * st.sigma_ff - sigma_zf(st, thetas) ** 2
        heis.append(np.max(np.abs(lhs - np.cos(thetas) ** 2 / 4) / np.maximum(sigma_zz(st, thetas) * st.sigma_ff, 0.25)))
        bound.append(np.max(st.qcrb / sigma_xx(st, thetas) - 1))
        th = optimal_angle(st)
        attain.append(abs(sigma_xx(st, th) / st.qcrb - 1))
        sh, ch = np.sinh(2 * st.r), np.cosh(2 * st.r)
        tan_caption = np.sin(2 * st.phi) * sh / (ch + np.cos(2 * st.phi) * sh)
        caption.append(abs(abs(np.tan(th)) - abs(tan_caption)) / max(1.0, abs(tan_caption)))
    return [
        ("single-shot purity det = 1/4", np.array(purity), CLOSED_FORM_TOL),
        ("single-shot Heisenberg equality", np.array(heis), CLOSED_FORM_TOL),
        ("single-shot sigma >= QCRB", np.array(bound), CLOSED_FORM_TOL),
        ("single-shot attainment at theta*", np.array(attain), CLOSED_FORM_TOL),
        ("single-shot |tan theta*| formula", np.array(caption), CLOSED_FORM_TOL),
    ]


def verify(config):
    """Run every check on the configuration's grid and state."""
    f = config.grid.frequencies()
    det = assemble_detector(config.detector.params())
    f = f[_loop_ok(det, 2 * np.pi * f)]
    checks = [_result(name, res, tol, f) for name, res, tol in _physical_checks(config, f)]
    checks += [_result(name, res, tol, None) for name, res, tol in _single_shot_checks(config)]
    return VerifyReport(checks)
