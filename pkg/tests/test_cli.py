import json

import pytest

from qlimit.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_VERIFY, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_show_config(capsys):
    code, out, _ = run(capsys, "show-config", "--preset", "fig3-detuned", "--seed", "9")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["detector"]["detuning_hz"] == 400.0 and doc["seed"] == 9


def test_sweep_to_stdout(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"n_points": 4}}))
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--detuning-hz", "400")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("f_hz,sqrt_qcrb") and len(out.splitlines()) == 5


def test_sweep_files(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"n_points": 4}}))
    out = tmp_path / "s.csv"
    code, _, err = run(capsys, "sweep", "--config", str(cfg), "--out", str(out), "--svg", "--single-sided")
    assert code == EXIT_OK and out.exists() and (tmp_path / "s.svg").exists()
    assert "wrote" in err


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "c.json"
    bad.write_text(json.dumps({"squeeze": {"r": -1}}))
    code, out, err = run(capsys, "verify", "--config", str(bad))
    assert code == EXIT_CONFIG and out == "" and "squeeze" in err
    assert run(capsys, "sweep", "--config", str(tmp_path / "missing.json"))[0] == EXIT_CONFIG
    assert run(capsys, "single-shot", "--r", "-2")[0] == EXIT_CONFIG
    assert run(capsys, "sweep", "--svg")[0] == EXIT_CONFIG


def test_io_error(capsys):
    code, _, err = run(capsys, "sweep", "--out", "/no/such/dir/x.csv")
    assert code == EXIT_IO and "/no/such/dir/x.csv" in err


def test_verify_exit_codes(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid": {"n_points": 16}}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == EXIT_OK and out.strip().endswith("checks passed")
    import qlimit.verify as vf

    monkeypatch.setattr(vf, "IDENTITY_TOL", -1.0)
    assert run(capsys, "verify", "--config", str(cfg))[0] == EXIT_VERIFY


def test_single_shot_verb(capsys):
    code, out, _ = run(capsys, "single-shot", "--r", "1", "--phi", "0.5", "--theta", "opt",
                       "--n-samples", "5000", "--seed", "3")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["n_samples"] == 5000 and doc["seed"] == 3
    assert doc["excess_over_qcrb"] == pytest.approx(0.0, abs=1e-12)


def test_bad_theta_argument(capsys):
    with pytest.raises(SystemExit):
        main(["single-shot", "--theta", "best"])
