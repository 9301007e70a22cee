"""Estimation error, QCRB, SQL, optimal readout and bound diagnostics.

All quantities are double-sided symmetrised spectra.  Readout quadratures are
``Z(theta) = Z1 sin(theta) + Z2 cos(theta)`` with ``theta in [0, pi)``; the
phase quadrature is ``theta = 0``.

Per-frequency inputs are bundled in :class:`DetectorSpectra`, computed once
from a detector and a squeeze profile.  Everything in ``theta`` then reduces
to 2x2 real quadratic forms::

    S_ZZ(theta)    = v^T N v,  N = [[S_11, Re S_12], [Re S_12, S_22]]
    |chi_ZF|^2     = v^T D v,  D = Re(chi chi^H)
    v              = (sin theta, cos theta)
"""
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .constants import HBAR
from .errors import BlindQuadratureError, UnboundedQCRBError
from .response import susceptibility_from_modes
from .squeezing import VACUUM, bogoliubov_transform, mode_bound

GRID_POINTS = 2048
REFINE_LEVELS = 5
EXACT_TOL = 1e-9


def theta_grid(n=GRID_POINTS):
    return np.arange(n) * (np.pi / n)


def _wrap(theta):
    return np.mod(theta, np.pi)


@dataclass(frozen=True)
class ModeBounds:
    """Magnitude bounds on mode values at ``+w`` and ``-w`` (see :func:`mode_bound`)."""

    z1: np.ndarray
    z2: np.ndarray
    f: np.ndarray
    z1_neg: np.ndarray
    z2_neg: np.ndarray
    f_neg: np.ndarray

    def readout(self, theta):
        s, c = np.abs(np.sin(theta)), np.abs(np.cos(theta))
        return s * self.z1 + c * self.z2, s * self.z1_neg + c * self.z2_neg

    def spectrum_scales(self, theta):
        """Term-size scales ``(ZZ, ZF, FF)`` for the spectra of ``Z(theta)`` and ``F``."""
        zp, zn = self.readout(theta)
        return (zp**2 + zn**2) / 2, (zp * self.f + zn * self.f_neg) / 2, (self.f**2 + self.f_neg**2) / 2


def _bounds(det, state, omega, loop, k1, k2):
    """Field-level and detector-level :class:`ModeBounds`; the loop gains enter by magnitude."""
    fm = det.field
    vals = [mode_bound(m, state, w) for w in (omega, -omega) for m in (fm.z1, fm.z2, fm.force)]
    field_b = ModeBounds(*vals)
    a1, a2, al = np.abs(k1), np.abs(k2), np.abs(loop)
    det_b = ModeBounds(
        z1=field_b.z1 + a1 * field_b.f, z2=field_b.z2 + a2 * field_b.f, f=field_b.f / al,
        z1_neg=field_b.z1_neg + a1 * field_b.f_neg, z2_neg=field_b.z2_neg + a2 * field_b.f_neg,
        f_neg=field_b.f_neg / al,
    )
    return field_b, det_b


@dataclass(frozen=True)
class DetectorSpectra:
    """Detector-level spectra and responses on a frequency grid."""

    omega: np.ndarray
    hbar: float
    s11: np.ndarray
    s22: np.ndarray
    s12: np.ndarray
    s1f: np.ndarray
    s2f: np.ndarray
    sff: np.ndarray
    chi1: np.ndarray
    chi2: np.ndarray
    chi_ff: np.ndarray
    sff_field: np.ndarray
    field_s11: np.ndarray
    field_s22: np.ndarray
    field_s12: np.ndarray
    field_s1f: np.ndarray
    field_s2f: np.ndarray
    field_chi1: np.ndarray
    field_chi2: np.ndarray
    loop: np.ndarray
    chi_qq: np.ndarray
    # mode values of the (state-transformed) detector observables at +w, -w
    z1: np.ndarray
    z2: np.ndarray
    f: np.ndarray
    z1_neg: np.ndarray
    z2_neg: np.ndarray
    f_neg: np.ndarray
    bounds: ModeBounds
    field_bounds: ModeBounds

    def cross_magnitudes(self):
        """Term-size scales of ``S_Z1F`` and ``S_Z2F`` (dominant-term scale)."""
        b = self.bounds
        m1 = (b.z1 * b.f + b.z1_neg * b.f_neg) / 2
        m2 = (b.z2 * b.f + b.z2_neg * b.f_neg) / 2
        return m1, m2

    def noise_form(self):
        return np.stack([self.s11, np.real(self.s12), self.s22], axis=-1)

    def signal_form(self):
        c = self.chi1 * np.conj(self.chi2)
        return np.stack([np.abs(self.chi1) ** 2, np.real(c), np.abs(self.chi2) ** 2], axis=-1)

    def s_zz(self, theta):
        s, c = np.sin(theta), np.cos(theta)
        return s * s * self.s11 + c * c * self.s22 + 2 * s * c * np.real(self.s12)

    def s_zf(self, theta):
        return np.sin(theta) * self.s1f + np.cos(theta) * self.s2f

    def chi_zf(self, theta):
        return np.sin(theta) * self.chi1 + np.cos(theta) * self.chi2

    def field_terms(self, theta):
        """Field-level ``(S_ZZ, S_ZF, S_FF, chi_ZF)`` for the readout angle ``theta``."""
        s, c = np.sin(theta), np.cos(theta)
        szz = s * s * self.field_s11 + c * c * self.field_s22 + 2 * s * c * np.real(self.field_s12)
        szf = s * self.field_s1f + c * self.field_s2f
        chi = s * self.field_chi1 + c * self.field_chi2
        return szz, szf, self.sff_field, chi


def _sym(a_pos, b_pos, a_neg, b_neg):
    return (a_pos * np.conj(b_pos) + b_neg * np.conj(a_neg)) / 2


def _mode_values(modes, state, omega):
    m = bogoliubov_transform(modes, state)
    return m(omega), m(-omega)


def detector_spectra(det, state=VACUUM, omega=None):
    """Detector spectra assembled from field-level spectra and the loop algebra.

    With ``Z_k = Z_k,field + K_k F_field`` and ``F = F_field / L`` (``K_k =
    chi_ZkF,field chi_qq / L``) every detector spectrum is a bilinear
    combination of field spectra.  Terms that vanish analytically at field
    level therefore vanish in the detector result as well, which keeps
    cancellation error out of the optimal-readout condition.  The direct
    mode-function route is :func:`detector_spectra_from_modes`.
    """
    omega = np.asarray(omega, dtype=np.float64)
    fm = det.field
    z1p, z1m = _mode_values(fm.z1, state, omega)
    z2p, z2m = _mode_values(fm.z2, state, omega)
    fp, fn = _mode_values(fm.force, state, omega)
    s11 = np.real(_sym(z1p, z1p, z1m, z1m))
    s22 = np.real(_sym(z2p, z2p, z2m, z2m))
    s12 = _sym(z1p, z2p, z1m, z2m)
    s1f = _sym(z1p, fp, z1m, fn)
    s2f = _sym(z2p, fp, z2m, fn)
    sff = np.real(_sym(fp, fp, fn, fn))

    loop = det.loop_factor(omega)
    chi_qq = det.test_mass.susceptibility(omega)
    k1 = fm.chi_z1f(omega) * chi_qq / loop
    k2 = fm.chi_z2f(omega) * chi_qq / loop
    inv_lc = 1 / np.conj(loop)
    field_b, det_b = _bounds(det, state, omega, loop, k1, k2)
    return DetectorSpectra(
        omega=omega,
        hbar=det.params.hbar,
        s11=s11 + 2 * np.real(np.conj(k1) * s1f) + np.abs(k1) ** 2 * sff,
        s22=s22 + 2 * np.real(np.conj(k2) * s2f) + np.abs(k2) ** 2 * sff,
        s12=s12 + np.conj(k2) * s1f + k1 * np.conj(s2f) + k1 * np.conj(k2) * sff,
        s1f=inv_lc * (s1f + k1 * sff),
        s2f=inv_lc * (s2f + k2 * sff),
        sff=sff / np.abs(loop) ** 2,
        chi1=det.chi_z1f(omega),
        chi2=det.chi_z2f(omega),
        chi_ff=det.chi_ff(omega),
        sff_field=sff,
        field_s11=s11, field_s22=s22, field_s12=s12, field_s1f=s1f, field_s2f=s2f,
        field_chi1=fm.chi_z1f(omega), field_chi2=fm.chi_z2f(omega),
        loop=loop,
        chi_qq=chi_qq,
        z1=z1p + k1 * fp, z2=z2p + k2 * fp, f=fp / loop,
        z1_neg=z1m + np.conj(k1) * fn, z2_neg=z2m + np.conj(k2) * fn, f_neg=fn / np.conj(loop),
        bounds=det_b, field_bounds=field_b,
    )


def detector_spectra_from_modes(det, state=VACUUM, omega=None):
    """Same quantities evaluated directly from the detector mode functions.

    Susceptibilities come from the commutator form of the modes rather than
    from the closed-loop transfer functions.
    """
    omega = np.asarray(omega, dtype=np.float64)
    z1p, z1m = _mode_values(det.detector_z1, state, omega)
    z2p, z2m = _mode_values(det.detector_z2, state, omega)
    fp, fn = _mode_values(det.detector_f, state, omega)
    ffp, ffn = _mode_values(det.field.force, state, omega)
    fz1p, fz1m = _mode_values(det.field.z1, state, omega)
    fz2p, fz2m = _mode_values(det.field.z2, state, omega)
    hbar = det.params.hbar
    loop = det.loop_factor(omega)
    chi_qq = det.test_mass.susceptibility(omega)
    field_b, det_b = _bounds(det, state, omega, loop, det.field.chi_z1f(omega) * chi_qq / loop,
                             det.field.chi_z2f(omega) * chi_qq / loop)
    return DetectorSpectra(
        omega=omega,
        hbar=hbar,
        s11=np.real(_sym(z1p, z1p, z1m, z1m)),
        s22=np.real(_sym(z2p, z2p, z2m, z2m)),
        s12=_sym(z1p, z2p, z1m, z2m),
        s1f=_sym(z1p, fp, z1m, fn),
        s2f=_sym(z2p, fp, z2m, fn),
        sff=np.real(_sym(fp, fp, fn, fn)),
        chi1=susceptibility_from_modes(det.detector_z1, det.detector_f, omega, hbar),
        chi2=susceptibility_from_modes(det.detector_z2, det.detector_f, omega, hbar),
        chi_ff=det.chi_ff(omega),
        sff_field=np.real(_sym(ffp, ffp, ffn, ffn)),
        field_s11=np.real(_sym(fz1p, fz1p, fz1m, fz1m)),
        field_s22=np.real(_sym(fz2p, fz2p, fz2m, fz2m)),
        field_s12=_sym(fz1p, fz2p, fz1m, fz2m),
        field_s1f=_sym(fz1p, ffp, fz1m, ffn),
        field_s2f=_sym(fz2p, ffp, fz2m, ffn),
        field_chi1=susceptibility_from_modes(det.field.z1, det.field.force, omega, hbar),
        field_chi2=susceptibility_from_modes(det.field.z2, det.field.force, omega, hbar),
        loop=loop,
        chi_qq=chi_qq,
        z1=z1p, z2=z2p, f=fp, z1_neg=z1m, z2_neg=z2m, f_neg=fn,
        bounds=det_b, field_bounds=field_b,
    )


def estimation_error(spec, theta):
    """``sigma_xx(theta) = S_ZZ(theta) / |chi_ZF(theta)|^2`` (m^2/Hz)."""
    gain = np.abs(spec.chi_zf(theta)) ** 2
    if np.any(gain == 0):
        raise BlindQuadratureError(f"readout theta={theta!r} carries no signal")
    return spec.s_zz(theta) / gain


def qcrb(spec, check=True):
    """``hbar^2 / (4 S_FF)`` at detector level.

    With ``check`` the field-level form ``hbar^2 |1 - chi_qq chi_FF|^2 / (4 S_FF_field)``
    is evaluated too and must agree to 1e-12.
    """
    if np.any(spec.sff <= 0):
        raise UnboundedQCRBError("S_FF vanishes: the force port carries no fluctuations")
    bound = spec.hbar**2 / (4 * spec.sff)
    if check:
        other = qcrb_field_form(spec)
        dev = np.max(np.abs(other / bound - 1))
        if not dev <= 1e-12:
            raise ArithmeticError(f"QCRB two-path disagreement {dev:.3e}")
    return bound


def qcrb_field_form(spec):
    return spec.hbar**2 * np.abs(spec.loop) ** 2 / (4 * spec.sff_field)


def sql(test_mass, omega, hbar=HBAR):
    """``hbar |chi_qq| = 4 hbar / (M w^2)``."""
    return hbar * np.abs(test_mass.susceptibility(omega))


def rayleigh_min(num, den):
    """Closed-form minimum of ``v^T N v / v^T D v`` over 2-vectors.

    ``N`` positive definite and ``D`` positive semi-definite, both as
    ``(..., 3)`` coefficient triples.  Returns ``(lambda_min, theta_min)``.
    """
    n11, n12, n22 = num[..., 0], num[..., 1], num[..., 2]
    d11, d12, d22 = den[..., 0], den[..., 1], den[..., 2]
    det_n = n11 * n22 - n12**2
    b = n11 * d22 + n22 * d11 - 2 * n12 * d12
    # b^2 - 4 det_n det_d rewritten without the cancellation of nearly proportional N, D
    disc2 = (n11 * d22 - n22 * d11) ** 2 + 4 * (n11 * d12 - n12 * d11) * (n22 * d12 - n12 * d22)
    disc = np.sqrt(np.maximum(disc2, 0.0))
    lam = 2 * det_n / (b + disc)
    # null vector of N - lam D: either row gives it, take the better conditioned
    r1 = np.stack([-(n12 - lam * d12), n11 - lam * d11], axis=-1)
    r2 = np.stack([n22 - lam * d22, -(n12 - lam * d12)], axis=-1)
    use1 = np.linalg.norm(r1, axis=-1) >= np.linalg.norm(r2, axis=-1)
    v = np.where(use1[..., None], r1, r2)
    return lam, _wrap(np.arctan2(v[..., 0], v[..., 1]))


@dataclass(frozen=True)
class OptimalReadout:
    theta: np.ndarray
    exact: np.ndarray
    degenerate: np.ndarray
    sigma: np.ndarray
    sigma_grid: np.ndarray
    theta_grid: np.ndarray


def optimal_theta(spec, grid_points=GRID_POINTS, levels=REFINE_LEVELS):
    """Per-frequency optimal readout angle.

    Where ``Im[S_Z1F conj(S_Z2F)]`` vanishes an uncorrelated quadrature exists
    and is returned (``exact=True``).  Elsewhere the angle minimising
    ``sigma_xx`` comes from the 2x2 generalized eigenproblem.  A grid scan of
    ``grid_points`` angles (plus ``levels`` zoom passes) runs in both cases as
    a cross-check; its result is reported alongside.
    """
    cross = spec.s2f * np.conj(spec.s1f)
    m1, m2 = spec.cross_magnitudes()
    scale = m1 * m2
    magnitude = np.hypot(np.abs(spec.s1f), np.abs(spec.s2f))
    degenerate = magnitude == 0
    exact = (np.abs(np.imag(cross)) <= EXACT_TOL * scale) & ~degenerate
    theta_exact = _wrap(np.arctan2(-np.real(cross), np.abs(spec.s1f) ** 2))
    mask_s1 = np.abs(spec.s1f) == 0
    theta_exact = np.where(mask_s1 & ~degenerate, np.pi / 2, theta_exact)

    num, den = spec.noise_form(), spec.signal_form()
    _, theta_ray = rayleigh_min(num, den)
    theta = np.where(exact, theta_exact, theta_ray)
    theta = np.where(degenerate, 0.0, theta)

    sigma_grid, theta_g = _kernels.scan_quadratic_ratio(num.reshape(-1, 3), den.reshape(-1, 3),
                                                         grid_points, levels)
    sigma = estimation_error(spec, theta)
    return OptimalReadout(theta=theta, exact=exact, degenerate=degenerate, sigma=sigma,
                          sigma_grid=sigma_grid.reshape(theta.shape),
                          theta_grid=theta_g.reshape(theta.shape))


@dataclass(frozen=True)
class RminDiagnostics:
    beta: np.ndarray
    alpha_mag: np.ndarray
    phi_alpha_prime: np.ndarray
    r_min_closed: np.ndarray
    r_min_grid: np.ndarray
    theta_grid: np.ndarray


def rmin_closed_form(beta_abs, hbar):
    beta_abs = np.asarray(beta_abs, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        val = np.abs(1 - beta_abs) / (1 + beta_abs)
    return 0.5 * hbar * np.where(np.isinf(beta_abs), 1.0, val)


def _alpha(spec, theta):
    cot = np.cos(theta) / np.sin(theta)
    return (np.conj(spec.z1_neg) + np.conj(spec.z2_neg) * cot) / (spec.z1 + spec.z2 * cot)


def rmin_diagnostics(spec, grid_points=GRID_POINTS, levels=REFINE_LEVELS):
    """Minimum over readout angle of ``|S_ZF / chi_ZF|``, closed form and grid."""
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = spec.f_neg / np.conj(spec.f)
    beta_abs = np.where(spec.f == 0, np.inf, np.abs(beta))
    r_closed = rmin_closed_form(beta_abs, spec.hbar)
    r_grid, theta_g = _kernels.scan_abs_ratio(spec.s1f.ravel(), spec.s2f.ravel(),
                                              spec.chi1.ravel(), spec.chi2.ravel(),
                                              grid_points, levels)
    r_grid = r_grid.reshape(spec.omega.shape)
    theta_g = theta_g.reshape(spec.omega.shape)
    alpha_mag = np.abs(_alpha(spec, np.pi / 3))
    # phi' = arg(alpha) + arg(beta) - pi/2 so that R is minimal at phi' = pi/2
    theta_pos = np.where(theta_g == 0, np.pi / grid_points, theta_g)
    phi_a = np.angle(_alpha(spec, theta_pos)) + np.angle(beta) - np.pi / 2
    phi_a = np.angle(np.exp(1j * phi_a))
    return RminDiagnostics(beta=beta, alpha_mag=alpha_mag, phi_alpha_prime=phi_a,
                           r_min_closed=r_closed, r_min_grid=r_grid, theta_grid=theta_g)


def uncertainty_terms(spec, theta):
    """Both sides of the continuous Heisenberg relation for ``Z(theta)`` and ``F``.

    Returns ``(lhs, rhs, im_term, scale)`` with
    ``lhs = S_ZZ S_FF - |S_ZF|^2``,
    ``rhs = hbar^2 |chi_ZF|^2 / 4 + hbar |im_term|``,
    ``im_term = Im[S_ZZ chi_FF - conj(S_ZF) chi_ZF]`` and ``scale`` the size of
    the dominant term for relative comparisons.
    """
    szz, szf, chi = spec.s_zz(theta), spec.s_zf(theta), spec.chi_zf(theta)
    im_term = np.imag(szz * spec.chi_ff - np.conj(szf) * chi)
    lhs = szz * spec.sff - np.abs(szf) ** 2
    rhs = spec.hbar**2 * np.abs(chi) ** 2 / 4 + spec.hbar * np.abs(im_term)
    bzz, _, bff = spec.bounds.spectrum_scales(theta)
    scale = np.maximum.reduce([szz * spec.sff, bzz * bff, spec.hbar**2 * np.abs(chi) ** 2 / 4])
    return lhs, rhs, im_term, scale


def quantum_limit_scale(spec, theta):
    chi = spec.chi_zf(theta)
    bzz, bzf, _ = spec.bounds.spectrum_scales(theta)
    return np.maximum.reduce([bzz * np.abs(spec.chi_ff), bzf * np.abs(chi), spec.hbar * np.abs(chi) ** 2])


def readout_identity_residual(spec):
    """Relative residual of ``Im[S_Z1F conj(S_Z2F)] = (hbar/4) Im chi_FF``."""
    lhs = np.imag(spec.s1f * np.conj(spec.s2f))
    rhs = spec.hbar / 4 * np.imag(spec.chi_ff)
    m1, m2 = spec.cross_magnitudes()
    scale = np.maximum(m1 * m2, spec.hbar / 4 * np.abs(spec.chi_ff))
    return np.abs(lhs - rhs) / scale


@dataclass(frozen=True)
class SensitivityPoint:
    """Per-frequency summary; array fields follow ``omega``."""

    omega: np.ndarray
    sigma_theta: np.ndarray
    theta: float
    sigma_opt: np.ndarray
    qcrb: np.ndarray
    sql: np.ndarray
    theta_opt: np.ndarray
    exact: np.ndarray
    ratio_amp: np.ndarray
    r_min: np.ndarray
    beta_abs: np.ndarray


def sensitivity(det, state=VACUUM, omega=None, theta=0.0):
    spec = detector_spectra(det, state, omega)
    opt = optimal_theta(spec)
    bound = qcrb(spec)
    rmin = rmin_diagnostics(spec)
    return SensitivityPoint(
        omega=spec.omega,
        sigma_theta=estimation_error(spec, theta),
        theta=theta,
        sigma_opt=opt.sigma,
        qcrb=bound,
        sql=spec.hbar * np.abs(spec.chi_qq),
        theta_opt=opt.theta,
        exact=opt.exact,
        ratio_amp=np.sqrt(opt.sigma / bound),
        r_min=rmin.r_min_closed,
        beta_abs=np.abs(rmin.beta),
    )


@dataclass(frozen=True)
class BoundAudit:
    """Signed margins (>= 0 means satisfied) and residuals (small is good).

    ``sigma_over_qcrb_margin``: min over sampled angles of ``sigma/qcrb - 1``.
    ``two_qcrb_margin``: ``2 - sigma_opt/qcrb``.
    ``uncertainty_residual``: relative gap of the Heisenberg relation taken as an equality.
    ``quantum_limit_residual``: relative size of ``Im[S_ZZ chi_FF - conj(S_ZF) chi_ZF]``.
    ``decomposition_residual`` / ``backaction_cancellation``: imprecision/backaction
    checks, only defined (non-NaN) where the field self-susceptibility vanishes.
    """

    omega: np.ndarray
    sigma_over_qcrb_margin: np.ndarray
    two_qcrb_margin: np.ndarray
    uncertainty_residual: np.ndarray
    quantum_limit_residual: np.ndarray
    decomposition_residual: np.ndarray
    backaction_cancellation: np.ndarray


def bound_audit(det, state=VACUUM, omega=None, n_theta=64):
    spec = detector_spectra(det, state, omega)
    bound = qcrb(spec)
    opt = optimal_theta(spec)

    thetas = np.arange(n_theta) * (np.pi / n_theta)
    margin = np.full(spec.omega.shape, np.inf)
    unc = np.zeros(spec.omega.shape)
    qlim = np.zeros(spec.omega.shape)
    for th in np.concatenate([thetas, [None]]):
        t = opt.theta if th is None else th
        gain = np.abs(spec.chi_zf(t)) ** 2
        ok = gain > 0
        sig = np.where(ok, spec.s_zz(t) / np.where(ok, gain, 1.0), np.inf)
        margin = np.minimum(margin, sig / bound - 1)
        lhs, rhs, im_term, scale = uncertainty_terms(spec, t)
        unc = np.maximum(unc, np.abs(lhs - rhs) / scale)
        qlim = np.maximum(qlim, np.abs(im_term) / quantum_limit_scale(spec, t))

    tuned = spec.loop == 1
    decomposition = np.full(spec.omega.shape, np.nan)
    cancellation = np.full(spec.omega.shape, np.nan)
    if np.any(tuned):
        chi_qq = spec.chi_qq
        worst = np.zeros(spec.omega.shape)
        for t in (0.0, np.pi / 5, np.pi / 2, 2.0):
            szz, szf, sff, chi = spec.field_terms(t)
            bzz, bzf, bff = spec.field_bounds.spectrum_scales(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                g2 = np.abs(chi) ** 2
                three = szz / g2 + 2 * np.real(np.conj(chi_qq) * szf / chi) + chi_qq**2 * sff
                direct = spec.s_zz(t) / np.abs(spec.chi_zf(t)) ** 2
                scale = np.maximum(direct, bzz / g2 + 2 * np.abs(chi_qq) * bzf / np.abs(chi) + chi_qq**2 * bff)
                worst = np.maximum(worst, np.abs(three - direct) / scale)
        decomposition = np.where(tuned, worst, np.nan)
        _, szf, sff, chi = spec.field_terms(opt.theta)
        _, bzf, _ = spec.field_bounds.spectrum_scales(opt.theta)
        scale = np.maximum(np.abs(chi_qq) * sff, bzf / np.abs(chi))
        res = np.abs(szf / chi + chi_qq * sff) / scale
        cancellation = np.where(tuned, res, np.nan)

    return BoundAudit(
        omega=spec.omega,
        sigma_over_qcrb_margin=margin,
        two_qcrb_margin=2 - opt.sigma / bound,
        uncertainty_residual=unc,
        quantum_limit_residual=qlim,
        decomposition_residual=decomposition,
        backaction_cancellation=cancellation,
    )
