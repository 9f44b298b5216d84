"""CLI dispatch: formats, units, config round-trip, exit codes."""

import json
import math
import subprocess
import sys

import pytest

import underspread.cli as cli
from underspread import solve_interval
from underspread.cli import main, parse_grid, parse_snr


def run_main(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- argument parsing helpers -------------------------------------------

@pytest.mark.parametrize("text,want", [
    ("100", 100.0), ("0.5", 0.5), ("20dB", 100.0), ("20 dB", 100.0),
    ("0dB", 1.0), ("-10dB", 0.1), ("3.0103dB", pytest.approx(2.0, rel=1e-4)),
])
def test_parse_snr(text, want):
    assert parse_snr(text) == want


def test_parse_grid_forms():
    lin = parse_grid("0:1:lin:5")
    assert list(lin) == [0.0, 0.25, 0.5, 0.75, 1.0]
    log = parse_grid("1e-7:1e-4:log:4")
    assert log[0] == pytest.approx(1e-7)
    assert log[-1] == pytest.approx(1e-4)
    assert len(log) == 4
    assert len(parse_grid("2:9:lin:1")) == 1
    for bad in ("1:2:3", "1:2:geo:4", "0:1:log:3", "1:2:lin:0"):
        with pytest.raises(ValueError):
            parse_grid(bad)


# --- happy paths ---------------------------------------------------------

def test_coeffs_json_deterministic(capsys):
    code, out1, _ = run_main(["coeffs", "--tf", "1.02"], capsys)
    assert code == 0
    code, out2, _ = run_main(["coeffs", "--tf", "1.02"], capsys)
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["command"] == "coeffs"
    assert doc["params"]["tf"] == 1.02
    assert doc["results"]["gain_curvature"] > 0
    assert doc["results"]["interference_slope"] > 0


def test_bound_zero_point(capsys):
    code, out, _ = run_main(
        ["bound", "--tf", "1.02", "--spread", "0", "--eps", "0",
         "--snr", "0"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["value"] == 0.0
    assert doc["results"]["snr_db"] is None


def test_bound_base_conversion(capsys):
    args = ["bound", "--tf", "1.02", "--spread", "1e-5", "--eps", "1e-5",
            "--snr", "20dB"]
    _, out_nats, _ = run_main(args + ["--base", "nats"], capsys)
    _, out_bits, _ = run_main(args + ["--base", "bits"], capsys)
    v_nats = json.loads(out_nats)["results"]["value"]
    v_bits = json.loads(out_bits)["results"]["value"]
    assert v_bits == pytest.approx(v_nats / math.log(2.0), rel=1e-12)
    assert json.loads(out_nats)["results"]["snr_db"] == pytest.approx(20.0)


def test_pulse_freq_csv(capsys):
    code, out, _ = run_main(
        ["pulse", "--tf", "1.02", "--domain", "freq",
         "--grid", "0:0.4:lin:3", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "f,G"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(1.02 ** 0.25, rel=1e-10)


def test_pulse_ambiguity_csv(capsys):
    code, out, _ = run_main(
        ["pulse", "--tf", "1.02", "--domain", "ambiguity",
         "--doppler-grid", "0:0.005:lin:2", "--delay-grid", "0:0.005:lin:2",
         "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "doppler,delay,ambiguity_sq,interference_sum"
    assert len(lines) == 5
    origin = lines[1].split(",")
    assert float(origin[2]) == pytest.approx(1.0)
    assert float(origin[3]) < 1e-12


def test_interval_matches_library(capsys):
    code, out, _ = run_main(
        ["interval", "--tf", "1.02", "--spread", "1e-5", "--eps", "1e-5"],
        capsys)
    assert code == 0
    doc = json.loads(out)
    direct = solve_interval(1.02, 1e-5, 1e-5)
    assert doc["results"]["snr_min_db"] == pytest.approx(direct.snr_min_db)
    assert doc["results"]["snr_max_db"] == pytest.approx(direct.snr_max_db)
    assert doc["results"]["converged"] is True


def test_sweep_csv_matches_interval_calls(capsys):
    code, out, _ = run_main(
        ["sweep", "--tf", "1.02", "--spread-grid", "1e-6:1e-5:log:2",
         "--eps-grid", "1e-6:1e-5:log:2", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 5
    for line in lines[1:]:
        spread, eps, snr_min_db, snr_max_db = \
            [float(x) for x in line.split(",")[:4]]
        direct = solve_interval(1.02, spread, eps)
        assert snr_min_db == pytest.approx(direct.snr_min_db, abs=1e-6)
        assert snr_max_db == pytest.approx(direct.snr_max_db, abs=1e-6)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "coeffs.json"
    code, out, _ = run_main(
        ["coeffs", "--tf", "1.02", "--out", str(target)], capsys)
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["command"] == "coeffs"


# --- config round-trip ---------------------------------------------------

def test_config_roundtrip_byte_identical(tmp_path, capsys):
    first = tmp_path / "run1.json"
    code, _, _ = run_main(
        ["interval", "--tf", "1.02", "--spread", "1e-5", "--eps", "1e-5",
         "--out", str(first)], capsys)
    assert code == 0
    code, out, _ = run_main(["interval", "--config", str(first)], capsys)
    assert code == 0
    assert out == first.read_text()


def test_config_conflict_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    run_main(["interval", "--tf", "1.02", "--spread", "1e-5", "--eps",
              "1e-5", "--out", str(cfg)], capsys)
    code, _, err = run_main(
        ["interval", "--config", str(cfg), "--spread", "2e-5"], capsys)
    assert code == 2
    assert "conflicts" in err


def test_config_wrong_command_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    run_main(["coeffs", "--tf", "1.02", "--out", str(cfg)], capsys)
    code, _, err = run_main(["interval", "--config", str(cfg)], capsys)
    assert code == 2
    assert "error: usage:" in err


def test_config_missing_file_exits_2(capsys):
    code, _, err = run_main(["coeffs", "--config", "/nonexistent.json"],
                            capsys)
    assert code == 2
    assert "error: usage:" in err


# --- error exit codes ----------------------------------------------------

def test_invalid_parameter_exits_3(capsys):
    code, _, err = run_main(["coeffs", "--tf", "3.0"], capsys)
    assert code == 3
    assert err.startswith("error: invalid-parameter:")


def test_bad_grid_exits_3(capsys):
    code, _, err = run_main(
        ["pulse", "--tf", "1.02", "--domain", "time", "--grid", "0:1:geo:5"],
        capsys)
    assert code == 3
    assert err.startswith("error: invalid-parameter:")


def test_missing_required_exits_2(capsys):
    code, _, err = run_main(["bound", "--tf", "1.02", "--spread", "1e-5"],
                            capsys)
    assert code == 2
    assert "missing required" in err


def test_computation_error_exits_4(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise RuntimeError("synthetic failure")

    monkeypatch.setattr(cli, "solve_interval", boom)
    code, _, err = run_main(
        ["interval", "--tf", "1.02", "--spread", "1e-5", "--eps", "1e-5"],
        capsys)
    assert code == 4
    assert err.startswith("error: computation:")


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "underspread", "coeffs", "--tf", "1.02"],
        capture_output=True, text=True, timeout=120)
    assert out.returncode == 0
    assert json.loads(out.stdout)["command"] == "coeffs"
