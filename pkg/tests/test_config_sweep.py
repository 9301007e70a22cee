import json
import math

import numpy as np
import pytest

from qlimit.config import ConfigError, RunConfig, from_dict, load, preset
from qlimit.sweep import (
    COLUMNS,
    FLAG_SINGULAR,
    OutputError,
    emit,
    rows_from_json,
    run_sweep,
    to_csv,
    to_json,
    to_svg,
)
from qlimit.verify import verify

from oracles import SQL_STRAIN_100HZ


def test_defaults_and_presets():
    cfg = RunConfig()
    assert (cfg.grid.f_min_hz, cfg.grid.f_max_hz, cfg.grid.n_points, cfg.grid.spacing) == (10.0, 1e4, 600, "log")
    assert preset("fig3-detuned").detector.detuning_hz == 400.0
    assert preset("fig3-tuned") == cfg
    with pytest.raises(ConfigError, match="unknown preset"):
        preset("fig4")


@pytest.mark.parametrize("doc, where", [
    ({"detector": {"mass": 40}}, "detector.mass"),
    ({"bogus": 1}, "bogus"),
    ({"grid": {"n_points": 1}}, "grid.n_points"),
    ({"grid": {"f_min_hz": 0}}, "grid.f_min_hz"),
    ({"grid": {"spacing": "cubic"}}, "grid.spacing"),
    ({"squeeze": {"r": -1}}, "squeeze"),
    ({"detector": {"gamma_hz": -3}}, "gamma"),
    ({"readout": {"theta": "x"}}, "readout.theta"),
    ({"output": {"svg": 1}}, "output.svg"),
    ({"seed": 1.5}, "seed"),
])
def test_strict_validation_names_the_field(doc, where):
    with pytest.raises(ConfigError, match=where.replace(".", r"\.")):
        from_dict(doc)


def test_load_round_trip(tmp_path):
    cfg = preset("fig3-detuned").replace(squeeze={"r": 0.5, "family": "single_pole"})
    path = tmp_path / "c.json"
    path.write_text(cfg.to_json())
    assert load(path) == cfg
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="bad.json"):
        load(bad)


def test_two_point_grid():
    rows = run_sweep(preset("fig3-tuned").replace(grid={"n_points": 2, "f_min_hz": 100.0, "f_max_hz": 1000.0}))
    assert [r.f_hz for r in rows] == [100.0, 1000.0]


def test_strain_referred_sql():
    row = run_sweep(preset("fig3-tuned"), freqs=[100.0])[0]
    assert row.sqrt_sql == pytest.approx(SQL_STRAIN_100HZ, rel=1e-14)


def test_tuned_rows_attain_the_bound():
    rows = run_sweep(preset("fig3-tuned"))
    assert all(abs(r.sqrt_sigma_opt / r.sqrt_qcrb - 1) <= 1e-6 for r in rows)
    assert all(r.flag == "ok" for r in rows)


def test_single_sided_scaling():
    cfg = preset("fig3-detuned").replace(grid={"n_points": 20})
    a = run_sweep(cfg)
    b = run_sweep(cfg.replace(output={"sided": "single"}))
    for ra, rb in zip(a, b):
        for col in ("sqrt_qcrb", "sqrt_sql", "sqrt_sigma_phase", "sqrt_sigma_opt"):
            assert getattr(rb, col) == pytest.approx(math.sqrt(2) * getattr(ra, col), rel=1e-15)
        assert rb.ratio_amp == ra.ratio_amp


def test_readout_modes():
    cfg = preset("fig3-detuned").replace(grid={"n_points": 10})
    opt = run_sweep(cfg.replace(readout={"mode": "optimal"}))
    assert all(r.sqrt_sigma_phase == r.sqrt_sigma_opt for r in opt)
    fixed = run_sweep(cfg.replace(readout={"mode": "fixed", "theta": 0.0}))
    assert [r.sqrt_sigma_phase for r in fixed] == [r.sqrt_sigma_phase for r in run_sweep(cfg)]


def test_singular_frequency_only_changes_the_flag(monkeypatch):
    import qlimit.sweep as sw

    cfg = preset("fig3-detuned").replace(grid={"n_points": 8})
    f = cfg.grid.frequencies()
    clean = run_sweep(cfg)
    real_ok = sw._loop_ok
    monkeypatch.setattr(sw, "_loop_ok", lambda det, w: real_ok(det, w) & (w != 2 * np.pi * f[3]))
    flagged = run_sweep(cfg)
    assert flagged[3].flag == FLAG_SINGULAR and math.isnan(flagged[3].sqrt_qcrb)
    assert [r for i, r in enumerate(flagged) if i != 3] == [r for i, r in enumerate(clean) if i != 3]
    assert to_csv(flagged).count("nan") == 7


def test_csv_header_and_precision():
    rows = run_sweep(preset("fig3-detuned").replace(grid={"n_points": 3}))
    text = to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 4
    for line, row in zip(lines[1:], rows):
        fields = line.split(",")
        assert float(fields[1]) == row.sqrt_qcrb and fields[-1] == "ok"


def test_json_round_trip_is_bit_exact():
    rows = run_sweep(preset("fig3-detuned").replace(grid={"n_points": 25}))
    back = rows_from_json(to_json(rows))
    assert back == rows
    assert json.loads(to_json(rows))["columns"] == list(COLUMNS)


def test_svg_has_four_series():
    svg = to_svg(run_sweep(preset("fig3-tuned").replace(grid={"n_points": 30})))
    assert svg.count("<polyline") == 4
    assert "frequency [Hz]" in svg and "strain noise" in svg


def test_emit_files(tmp_path):
    cfg = preset("fig3-tuned").replace(grid={"n_points": 5}, output={"svg": True, "format": "json"})
    paths = emit(run_sweep(cfg), cfg, path=tmp_path / "run.json")
    assert [p.rsplit("/", 1)[1] for p in paths] == ["run.json", "run.svg"]


def test_emit_reports_the_path():
    cfg = preset("fig3-tuned").replace(grid={"n_points": 2})
    with pytest.raises(OutputError, match="/no/such/dir/out.csv"):
        emit(run_sweep(cfg), cfg, path="/no/such/dir/out.csv")


def test_verify_detects_a_broken_invariant(monkeypatch):
    import qlimit.verify as vf

    cfg = preset("fig3-tuned").replace(grid={"n_points": 12})
    assert verify(cfg).passed
    monkeypatch.setattr(vf, "readout_identity_residual", lambda spec: np.full(spec.omega.shape, 1.0))
    report = verify(cfg)
    assert not report.passed
    bad = [c for c in report.checks if not c.passed]
    assert [c.name for c in bad] == ["readout cross-spectrum identity"]
    assert "FAIL" in report.text()
