"""Frequency sweeps of the detector model and their CSV / JSON / SVG output."""
import io
import json
import math
import os
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import QLimitError
from .interferometer import SINGULAR_LOOP_TOL, assemble_detector
from .qcrb import sensitivity

COLUMNS = (
    "f_hz",
    "sqrt_qcrb",
    "sqrt_sql",
    "sqrt_sigma_phase",
    "sqrt_sigma_opt",
    "theta_opt_rad",
    "ratio_amp",
    "rmin_over_half_hbar",
    "flag",
)
FLAG_OK = "ok"
FLAG_SINGULAR = "singular_loop"


class OutputError(QLimitError, OSError):
    """A result file could not be written."""


@dataclass(frozen=True)
class SweepRow:
    """One frequency of a sweep; amplitudes are strain-referred, 1/sqrt(Hz)."""

    f_hz: float
    sqrt_qcrb: float
    sqrt_sql: float
    sqrt_sigma_phase: float
    sqrt_sigma_opt: float
    theta_opt_rad: float
    ratio_amp: float
    rmin_over_half_hbar: float
    flag: str = FLAG_OK


assert tuple(f.name for f in fields(SweepRow)) == COLUMNS


def _loop_ok(det, omega):
    loop = 1 - det.test_mass.susceptibility(omega) * det.field.chi_ff(omega)
    return np.abs(loop) >= SINGULAR_LOOP_TOL


def run_sweep(config, freqs=None):
    """Evaluate the configured detector on its grid (or on ``freqs`` in Hz).

    Frequencies where the loop factor vanishes are kept as rows of NaN with
    ``flag="singular_loop"``.
    """
    params = config.detector.params()
    state = config.squeeze.profile()
    det = assemble_detector(params)
    f = config.grid.frequencies() if freqs is None else np.asarray(freqs, dtype=np.float64)
    omega = 2 * np.pi * f
    ok = _loop_ok(det, omega)

    n = f.size
    cols = {name: np.full(n, np.nan) for name in COLUMNS[1:-1]}
    if np.any(ok):
        theta = config.readout.theta_used
        pt = sensitivity(det, state, omega[ok], theta=0.0 if theta is None else theta)
        sigma_readout = pt.sigma_opt if theta is None else pt.sigma_theta
        amp = (math.sqrt(2.0) if config.output.sided == "single" else 1.0) / params.arm_length
        cols["sqrt_qcrb"][ok] = amp * np.sqrt(pt.qcrb)
        cols["sqrt_sql"][ok] = amp * np.sqrt(pt.sql)
        cols["sqrt_sigma_phase"][ok] = amp * np.sqrt(sigma_readout)
        cols["sqrt_sigma_opt"][ok] = amp * np.sqrt(pt.sigma_opt)
        cols["theta_opt_rad"][ok] = pt.theta_opt
        cols["ratio_amp"][ok] = pt.ratio_amp
        cols["rmin_over_half_hbar"][ok] = pt.r_min / (params.hbar / 2)

    return [
        SweepRow(float(f[i]), *(float(cols[c][i]) for c in COLUMNS[1:-1]),
                 flag=FLAG_OK if ok[i] else FLAG_SINGULAR)
        for i in range(n)
    ]


def _fmt(v):
    return v if isinstance(v, str) else f"{v:.17g}"


def to_csv(rows):
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in astuple(row)) + "\n")
    return buf.getvalue()


def to_json(rows):
    """JSON mirror of the CSV; NaN is written as ``null``."""
    def clean(v):
        return None if isinstance(v, float) and math.isnan(v) else v

    data = {"columns": list(COLUMNS),
            "rows": [{k: clean(v) for k, v in zip(COLUMNS, astuple(r))} for r in rows]}
    return json.dumps(data, indent=1) + "\n"


def rows_from_json(text):
    data = json.loads(text)
    return [SweepRow(**{k: (math.nan if v is None else v) for k, v in r.items()}) for r in data["rows"]]


_SERIES = (
    ("sqrt_qcrb", "QCRB", "#1b6ca8"),
    ("sqrt_sql", "SQL", "#444444"),
    ("sqrt_sigma_phase", "configured readout", "#d1495b"),
    ("sqrt_sigma_opt", "optimal readout", "#2e933c"),
)


def to_svg(rows, width=720, height=480):
    """Log-log line chart of the four amplitude columns, one polyline each."""
    f = np.array([r.f_hz for r in rows])
    ys = {key: np.array([getattr(r, key) for r in rows]) for key, _, _ in _SERIES}
    finite = np.concatenate([v[np.isfinite(v) & (v > 0)] for v in ys.values()])
    if finite.size == 0:
        finite = np.array([1.0])
    x0, x1 = math.log10(f.min()), math.log10(f.max())
    if x1 == x0:
        x1 = x0 + 1
    y0, y1 = math.floor(math.log10(finite.min())), math.ceil(math.log10(finite.max()))
    if y1 == y0:
        y1 = y0 + 1
    left, right, top, bottom = 80, 170, 20, 60
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + (math.log10(v) - x0) / (x1 - x0) * pw

    def py(v):
        return top + (y1 - math.log10(v)) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for d in range(math.ceil(x0), math.floor(x1) + 1):
        x = px(10.0**d)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 18}" text-anchor="middle">1e{d}</text>')
    for d in range(y0, y1 + 1):
        y = py(10.0**d)
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">1e{d}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 15}" text-anchor="middle">frequency [Hz]</text>')
    out.append(f'<text x="18" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2})">strain noise [1/sqrt(Hz)]</text>')
    for k, (key, label, color) in enumerate(_SERIES):
        v = ys[key]
        good = np.isfinite(v) & (v > 0)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(f[good], v[good]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 16 + 18 * k
        out.append(f'<text x="{left + pw + 12}" y="{ly}" fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def svg_path(path):
    return os.path.splitext(str(path))[0] + ".svg"


def emit(rows, config, path=None):
    """Write ``rows`` in the configured format; returns the paths written.

    With no path in either argument or config, nothing is written and the
    rendered text is returned as the single element instead.
    """
    if not rows:
        raise ValueError("emit needs at least one row")
    path = path or config.output.path
    text = to_csv(rows) if config.output.format == "csv" else to_json(rows)
    if path is None:
        return [text]
    write_text(path, text)
    written = [str(path)]
    if config.output.svg:
        sp = svg_path(path)
        write_text(sp, to_svg(rows))
        written.append(sp)
    return written
