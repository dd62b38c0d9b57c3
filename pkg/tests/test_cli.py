"""CLI contract tests: commands, exit codes, file formats, determinism."""
import csv
import json
import os
import subprocess
import sys

import pytest
from mpmath import mp

from oscgauss.cli import main

PI_80 = "3.1415926535897932384626433832795028841971693993751058209749445923078164062862089986"


def run_cli(args, tmp_path=None):
    """In-process invocation capturing the exit code."""
    return main(args)


def test_rule_gauss_osc_legendre_limit(tmp_path, capsys):
    out = tmp_path / "rule.json"
    code = run_cli(["rule", "--family", "gauss-osc", "--points", "2",
                    "--omega", "1e-8", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["kind"] == "gauss-oscillatory"
    xs = sorted(p[0] for p in data["nodes"])
    assert abs(xs[0] + 0.5773502691896258) < 1e-6
    assert abs(xs[1] - 0.5773502691896258) < 1e-6


def test_rule_nonexistent_exit_code_2(tmp_path):
    out = tmp_path / "err.json"
    code = run_cli(["rule", "--family", "gauss-osc", "--points", "1",
                    "--omega", "3.14159265358979", "--out", str(out)])
    assert code == 2
    data = json.loads(out.read_text())
    assert data["error"] == "non-existent"


def test_rule_superinterp_nodes(tmp_path):
    out = tmp_path / "si.json"
    code = run_cli(["rule", "--family", "superinterp", "--points", "2",
                    "--omega", "10", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    nodes = sorted(data["nodes"])
    assert abs(nodes[0][0] + 1) < 1e-12 and abs(nodes[0][1] - 0.1) < 1e-12
    assert abs(nodes[1][0] - 1) < 1e-12 and abs(nodes[1][1] - 0.1) < 1e-12


def test_usage_errors_exit_1(capsys):
    assert run_cli(["rule", "--family", "gauss-osc", "--points", "2"]) == 1
    with pytest.raises(SystemExit) as exc:
        run_cli(["rule", "--family", "bogus", "--points", "2", "--omega", "1"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run_cli(["not-a-command"])
    assert exc.value.code == 1


def test_trace_csv_headers_and_seed_row(tmp_path):
    out = tmp_path / "trace.csv"
    code = run_cli(["trace", "--n", "2", "--omega-min", "0.01", "--omega-max", "1.0",
                    "--steps", "25", "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["omega", "root_index", "re", "im", "speed"]
    first = sorted(float(r[2]) for r in rows[1:3])
    assert abs(first[0] + 0.57735) < 1e-3
    assert abs(first[1] - 0.57735) < 1e-3
    assert os.path.exists(tmp_path / "trace.cusps.csv")


def test_trace_n16_seeds_at_legendre(tmp_path):
    import numpy.polynomial.legendre as npleg

    out = tmp_path / "t16.csv"
    code = run_cli(["trace", "--n", "16", "--omega-min", "0.01", "--omega-max", "0.5",
                    "--steps", "8", "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))[1:]
    first_re = sorted(float(r[2]) for r in rows[:16])
    for a, b in zip(first_re, npleg.leggauss(16)[0]):
        assert abs(a - b) < 1e-3


def test_trace_rejects_late_start():
    assert run_cli(["trace", "--n", "2", "--omega-min", "0.5", "--omega-max", "2.0",
                    "--steps", "10"]) == 1


def test_breakdown_csv(tmp_path):
    out = tmp_path / "bd.csv"
    code = run_cli(["breakdown", "--n", "2", "--omega-min", "5.5", "--omega-max", "6.2",
                    "--step", "0.01", "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["n", "omega_star", "residual", "bracket_lo", "bracket_hi"]
    assert len(rows) == 2
    assert abs(float(rows[1][1]) - 5.9299590807714423) < 1e-8
    assert os.path.exists(tmp_path / "bd.samples.csv")


def test_breakdown_rejects_odd_n():
    assert run_cli(["breakdown", "--n", "3", "--omega-min", "1", "--omega-max", "2"]) == 1


def test_sweep_csv_footer_slope(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run_cli(["sweep", "--family", "superinterp", "--points", "2",
                    "--integrand", "sin", "--omega-min", "10", "--omega-max", "1000",
                    "--per-decade", "6", "--tol", "1e-20", "--out", str(out)])
    assert code == 0
    text = open(out).read().strip().splitlines()
    assert text[0].startswith("omega,abs_error")
    footer = text[-1]
    assert footer.startswith("# slope =")
    slope = float(footer.split("=")[1].split("+-")[0])
    assert -3.6 <= slope <= -2.4


def test_check_suite_exit_codes(capsys):
    code = run_cli(["check", "--suite", "exactness"])
    out = capsys.readouterr().out
    assert code == 0
    assert "exactness/gaussian-2n-1-exactness" in out
    assert "pass" in out


def test_determinism_identical_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run_cli(["rule", "--family", "gauss-osc", "--points", "4",
                        "--omega", "7.5", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_precision_env_override(tmp_path, monkeypatch):
    out = tmp_path / "r.json"
    monkeypatch.setenv("OSCGAUSS_PRECISION", "128")
    assert run_cli(["rule", "--family", "gauss-legendre", "--points", "2",
                    "--out", str(out)]) == 0
    assert json.loads(out.read_text())["precision_bits"] == 128
    monkeypatch.setenv("OSCGAUSS_PRECISION", "16")  # below floor
    with pytest.raises(SystemExit) as exc:
        run_cli(["rule", "--family", "gauss-legendre", "--points", "2",
                 "--out", str(out)])
    assert exc.value.code == 1


def test_precision_flag_after_subcommand(tmp_path):
    out = tmp_path / "r.json"
    assert run_cli(["rule", "--family", "gauss-legendre", "--points", "1",
                    "--precision", "512", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["precision_bits"] == 512


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "oscgauss.cli", "rule", "--family", "gauss-laguerre",
         "--points", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert abs(data["nodes"][0][0] - 1.0) < 1e-15


def test_full_precision_pi_is_nonexistent_singular(tmp_path):
    """An 80-digit pi still reports nonexistence (node divergence at double,
    pivot singularity once omega carries enough digits)."""
    out = tmp_path / "err.json"
    code = run_cli(["rule", "--family", "gauss-osc", "--points", "1",
                    "--omega", PI_80, "--out", str(out)])
    assert code == 2
