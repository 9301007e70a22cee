"""Inner loops: readout-angle grid scans and Monte Carlo error reductions.

Every kernel exists twice, once as a numba ``@njit`` function and once in
pure numpy, with identical semantics.  The numba versions are used when numba
imports cleanly and ``QLIMIT_DISABLE_NUMBA`` is unset, empty or ``0``.  Both
sets stay importable (``NUMPY_KERNELS`` / ``NUMBA_KERNELS``) so they can be
compared directly.

Quadratic forms in the readout angle use the convention
``q(theta) = c11 sin^2 + 2 c12 sin cos + c22 cos^2`` with the coefficient
triple stored as the last axis of a ``(n, 3)`` float array.

Scans run on a uniform grid of ``m`` angles over ``[0, pi)``.  Each of the
``levels`` refinement passes then lays a fresh ``m``-point grid over
``best +- 2 cells`` of the previous pass.
"""
import os
from types import SimpleNamespace

import numpy as np

__all__ = [
    "BACKEND",
    "NUMPY_KERNELS",
    "NUMBA_KERNELS",
    "scan_quadratic_ratio",
    "scan_abs_ratio",
    "squared_error_sums",
]


# --- pure numpy -----------------------------------------------------------

def _np_quadratic_ratio(num, den, th):
    s, c = np.sin(th), np.cos(th)
    qn = num[:, 0:1] * s * s + 2.0 * num[:, 1:2] * s * c + num[:, 2:3] * c * c
    qd = den[:, 0:1] * s * s + 2.0 * den[:, 1:2] * s * c + den[:, 2:3] * c * c
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(qd > 0.0, qn / qd, np.inf)


def _np_abs_ratio(a1, a2, b1, b2, th):
    s, c = np.sin(th), np.cos(th)
    top = np.abs(a1[:, None] * s + a2[:, None] * c)
    bot = np.abs(b1[:, None] * s + b2[:, None] * c)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(bot > 0.0, top / bot, np.inf)


def _np_zoom_scan(objective, n, m, levels):
    step = np.pi / m
    th = np.broadcast_to(np.arange(m) * step, (n, m))
    rows = np.arange(n)
    vals = objective(th)
    k = np.argmin(vals, axis=1)
    best, arg = vals[rows, k], th[rows, k]
    for _ in range(levels):
        lo = arg - 2.0 * step
        step = 4.0 * step / (m - 1)
        th = lo[:, None] + step * np.arange(m)[None, :]
        vals = objective(th)
        k = np.argmin(vals, axis=1)
        better = vals[rows, k] < best
        best = np.where(better, vals[rows, k], best)
        arg = np.where(better, th[rows, k], arg)
    return best, np.mod(arg, np.pi)


def _np_scan_quadratic_ratio(num, den, m, levels):
    return _np_zoom_scan(lambda th: _np_quadratic_ratio(num, den, th), num.shape[0], m, levels)


def _np_scan_abs_ratio(a1, a2, b1, b2, m, levels):
    return _np_zoom_scan(lambda th: _np_abs_ratio(a1, a2, b1, b2, th), a1.shape[0], m, levels)


def _np_squared_error_sums(z, gain, x_true):
    e2 = (z / gain - x_true) ** 2
    return float(np.sum(e2)), float(np.sum(e2 * e2))


NUMPY_KERNELS = SimpleNamespace(
    name="numpy",
    scan_quadratic_ratio=_np_scan_quadratic_ratio,
    scan_abs_ratio=_np_scan_abs_ratio,
    squared_error_sums=_np_squared_error_sums,
)


# --- numba ----------------------------------------------------------------

def _build_numba():
    import numba

    jit = numba.njit(cache=True, error_model="numpy")

    @jit
    def _quad(num, den, i, t):
        s = np.sin(t)
        c = np.cos(t)
        qd = den[i, 0] * s * s + 2.0 * den[i, 1] * s * c + den[i, 2] * c * c
        if qd > 0.0:
            return (num[i, 0] * s * s + 2.0 * num[i, 1] * s * c + num[i, 2] * c * c) / qd
        return np.inf

    @jit
    def _absr(a1, a2, b1, b2, i, t):
        s = np.sin(t)
        c = np.cos(t)
        bot = abs(b1[i] * s + b2[i] * c)
        if bot > 0.0:
            return abs(a1[i] * s + a2[i] * c) / bot
        return np.inf

    @jit
    def scan_quadratic_ratio(num, den, m, levels):
        n = num.shape[0]
        best = np.empty(n)
        arg = np.empty(n)
        for i in range(n):
            step = np.pi / m
            b = np.inf
            t_best = 0.0
            lo = 0.0
            for lev in range(levels + 1):
                if lev > 0:
                    lo = t_best - 2.0 * step
                    step = 4.0 * step / (m - 1)
                for j in range(m):
                    t = lo + j * step
                    r = _quad(num, den, i, t)
                    if r < b:
                        b = r
                        t_best = t
            best[i] = b
            arg[i] = t_best % np.pi
        return best, arg

    @jit
    def scan_abs_ratio(a1, a2, b1, b2, m, levels):
        n = a1.shape[0]
        best = np.empty(n)
        arg = np.empty(n)
        for i in range(n):
            step = np.pi / m
            b = np.inf
            t_best = 0.0
            lo = 0.0
            for lev in range(levels + 1):
                if lev > 0:
                    lo = t_best - 2.0 * step
                    step = 4.0 * step / (m - 1)
                for j in range(m):
                    t = lo + j * step
                    r = _absr(a1, a2, b1, b2, i, t)
                    if r < b:
                        b = r
                        t_best = t
            best[i] = b
            arg[i] = t_best % np.pi
        return best, arg

    @jit
    def _sums(z, gain, x_true):
        s2 = 0.0
        s4 = 0.0
        for k in range(z.shape[0]):
            e = z[k] / gain - x_true
            e2 = e * e
            s2 += e2
            s4 += e2 * e2
        return s2, s4

    def squared_error_sums(z, gain, x_true):
        s2, s4 = _sums(z, float(gain), float(x_true))
        return float(s2), float(s4)

    return SimpleNamespace(
        name="numba",
        scan_quadratic_ratio=scan_quadratic_ratio,
        scan_abs_ratio=scan_abs_ratio,
        squared_error_sums=squared_error_sums,
    )


try:
    NUMBA_KERNELS = _build_numba()
except ImportError:  # numba is an optional extra
    NUMBA_KERNELS = None

_disabled = os.environ.get("QLIMIT_DISABLE_NUMBA", "").strip() not in ("", "0")
_active = NUMPY_KERNELS if (_disabled or NUMBA_KERNELS is None) else NUMBA_KERNELS
BACKEND = _active.name


def scan_quadratic_ratio(num, den, m=2048, levels=0, kernels=None):
    """Grid minimum of ``q_num(theta) / q_den(theta)`` per row.

    Angles where the denominator form is not positive are skipped.  Returns
    ``(minimum, argmin_theta)``, each of shape ``(n,)``.
    """
    k = kernels or _active
    num = np.ascontiguousarray(num, dtype=np.float64)
    den = np.ascontiguousarray(den, dtype=np.float64)
    return k.scan_quadratic_ratio(num, den, int(m), int(levels))


def scan_abs_ratio(a1, a2, b1, b2, m=2048, levels=0, kernels=None):
    """Grid minimum of ``|a1 sin + a2 cos| / |b1 sin + b2 cos|`` per row."""
    k = kernels or _active
    args = [np.ascontiguousarray(np.ravel(v), dtype=np.complex128) for v in (a1, a2, b1, b2)]
    return k.scan_abs_ratio(*args, int(m), int(levels))


def squared_error_sums(z, gain, x_true, kernels=None):
    """Return ``(sum e^2, sum e^4)`` for ``e = z / gain - x_true``."""
    k = kernels or _active
    return k.squared_error_sums(np.ascontiguousarray(z, dtype=np.float64), gain, x_true)
