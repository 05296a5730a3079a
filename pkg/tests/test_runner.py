"""Tests for experiment execution, CSV output and the CLI."""

import csv
import json

import pytest

from agingmimo import parse_config, run_experiment
from agingmimo.cli import main
from agingmimo.runner import CSV_COLUMNS

FAST = {"n_r": 4, "delta_min": 1, "delta_max": 4, "delta": 4,
        "f_d_hz": [500.0], "p_pilot_grid_mw": [80.0, 125.0],
        "mc_trials": 200}


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_frame_sweep_rows(tmp_path):
    cfg = parse_config({**FAST, "experiment": "frame-sweep"})
    records, data_path, manifest_path = run_experiment(cfg, tmp_path)
    rows = _read_csv(data_path)
    assert len(rows) == 4
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert [r["delta"] for r in rows] == ["1", "2", "3", "4"]
    assert all(float(r["se_frame"]) > 0 for r in rows)
    manifest = json.loads(manifest_path.read_text())
    assert manifest["n_rows"] == 4
    assert manifest["n_failed"] == 0
    assert manifest["scenario_hash"] == cfg.scenario_hash()


def test_csv_byte_determinism(tmp_path):
    cfg = parse_config({**FAST, "experiment": "mc-validate", "seed": 3})
    _, path_a, _ = run_experiment(cfg, tmp_path / "a")
    _, path_b, _ = run_experiment(cfg, tmp_path / "b")
    assert path_a.read_bytes() == path_b.read_bytes()
    assert b"\r" not in path_a.read_bytes()


def test_per_slot_rows(tmp_path):
    cfg = parse_config({**FAST, "experiment": "per-slot"})
    _, path, _ = run_experiment(cfg, tmp_path)
    rows = _read_csv(path)
    assert [r["slot"] for r in rows] == ["1", "2", "3", "4"]
    assert all(float(r["gamma_tagged"]) > 0 for r in rows)
    assert all(float(r["se_slot"]) > 0 for r in rows)


def test_power_surface_rows(tmp_path):
    cfg = parse_config({**FAST, "experiment": "power-surface"})
    _, path, _ = run_experiment(cfg, tmp_path)
    rows = _read_csv(path)
    assert len(rows) == 2 * 4  # two pilot powers x four frame sizes
    assert {r["p_pilot_mw"] for r in rows} == {"80", "125"}


def test_bound_curve_reports_errors_not_failures(tmp_path):
    # at default noise the bound is unavailable; rows must carry the error
    cfg = parse_config({**FAST, "experiment": "bound-curve"})
    records, path, manifest_path = run_experiment(cfg, tmp_path)
    rows = _read_csv(path)
    assert all(r["error"] for r in rows)
    assert json.loads(manifest_path.read_text())["n_failed"] == 4
    # with heavy pilot noise the bound applies and the column fills in
    ok = parse_config({**FAST, "experiment": "bound-curve",
                       "sigma2_pilot": 1e-6, "sigma2_data": 1e-6})
    _, path2, _ = run_experiment(ok, tmp_path / "ok")
    rows2 = _read_csv(path2)
    assert all(float(r["se_upper"]) >= float(r["se_frame"]) for r in rows2)


def test_mismatch_and_window_compare(tmp_path):
    cfg = parse_config({**FAST, "experiment": "mismatch",
                        "mismatch_factors": [0.2, 1.0]})
    _, path, _ = run_experiment(cfg, tmp_path)
    rows = _read_csv(path)
    assert {r["factor"] for r in rows} == {"0.2", "1"}
    cfg2 = parse_config({**FAST, "experiment": "window-compare"})
    _, path2, _ = run_experiment(cfg2, tmp_path / "w")
    assert {r["window"] for r in _read_csv(path2)} == {"2b1a", "1b1a", "2b"}


def test_doppler_optimum_and_threads(tmp_path):
    cfg = parse_config({**FAST, "experiment": "doppler-optimum",
                        "sigma2_pilot": 1e-6, "sigma2_data": 1e-6})
    _, path_serial, _ = run_experiment(cfg, tmp_path / "s", threads=1)
    _, path_thread, _ = run_experiment(cfg, tmp_path / "t", threads=4)
    assert path_serial.read_bytes() == path_thread.read_bytes()
    rows = _read_csv(path_serial)
    assert all(int(r["delta"]) >= 1 for r in rows)


def test_json_output(tmp_path):
    cfg = parse_config({**FAST, "experiment": "frame-sweep"})
    _, path, _ = run_experiment(cfg, tmp_path, fmt="json")
    payload = json.loads(path.read_text())
    assert len(payload) == 4
    assert payload[0]["experiment"] == "frame-sweep"


def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(FAST))
    out = tmp_path / "out"
    assert main(["frame-sweep", "--config", str(cfg_path),
                 "--out", str(out)]) == 0
    assert capsys.readouterr().out.count("wrote 4 rows") == 1
    assert len(list(out.glob("*.csv"))) == 1

    bad = tmp_path / "bad.json"
    bad.write_text('{"bogus": 1}')
    assert main(["frame-sweep", "--config", str(bad), "--out", str(out)]) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "frame-sweep" in out and "mc-validate" in out


def test_cli_seed_override_changes_hash(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({**FAST}))
    main(["mc-validate", "--config", str(cfg_path), "--out",
          str(tmp_path / "a"), "--seed", "1"])
    main(["mc-validate", "--config", str(cfg_path), "--out",
          str(tmp_path / "b"), "--seed", "2"])
    name_a = next((tmp_path / "a").glob("*.csv")).name
    name_b = next((tmp_path / "b").glob("*.csv")).name
    assert name_a != name_b  # seed is part of the scenario hash


def test_threads_env_var(tmp_path, monkeypatch, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(FAST))
    monkeypatch.setenv("AGINGMIMO_THREADS", "2")
    assert main(["frame-sweep", "--config", str(cfg_path),
                 "--out", str(tmp_path / "env")]) == 0
    monkeypatch.setenv("AGINGMIMO_THREADS", "zebra")
    assert main(["frame-sweep", "--config", str(cfg_path),
                 "--out", str(tmp_path / "env2")]) == 2
