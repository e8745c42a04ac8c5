import csv
import io
import json
import math
import subprocess
import sys

import pytest

from pqmittag.cli import TABLE_HEADER, main, parse_config
from pqmittag.mlcore import MLParams, SeriesConfig, ml_extended_pq
from pqmittag.verifier import ConfigError, SuiteConfig


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def first_value(text):
    return float(text.split()[0])


def test_eval_exponential():
    code, out = run("eval", "--alpha", "1", "--beta", "1", "--gamma", "1", "--c", "2",
                    "--p", "0", "--q", "0", "--z", "1")
    assert code == 0
    assert out.split()[0] == "2.71828182845905"
    assert first_value(out) == pytest.approx(math.e, rel=1e-14)
    assert "+/-" in out and "converged" in out


def test_beta_classical():
    code, out = run("beta", "--x", "2", "--y", "2", "--p", "0", "--q", "0")
    assert code == 0
    assert out.split()[0] == "0.166666666666667"


def test_table_rows():
    code, out = run("table", "--alpha", "0.8", "--beta", "1", "--gamma", "1.2", "--c", "2.5",
                    "--p", "0.3", "--q", "0.6", "--z-from", "-1", "--z-to", "1", "--steps", "41")
    assert code == 0
    assert "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == TABLE_HEADER
    assert len(rows) == 42
    assert all(len(r) == 4 for r in rows)
    assert float(rows[1][0]) == -1.0 and float(rows[-1][0]) == 1.0
    assert int(rows[1][3]) > 0


def test_round_trip_precision():
    code, out = run("eval", "--alpha", "0.8", "--beta", "1.1", "--gamma", "1.2", "--c", "2.5",
                    "--p", "0.3", "--q", "0.6", "--z", "0.9", "--precision", "17")
    want = ml_extended_pq(MLParams(0.8, 1.1, 1.2, 2.5, 0.3, 0.6), 0.9).value
    assert first_value(out) == want


@pytest.mark.parametrize("method", ["unit", "halfline", "trig"])
def test_eval_routes(method):
    code, out = run("eval", "--alpha", "1", "--beta", "1", "--gamma", "1.2", "--c", "2.5",
                    "--p", "0.25", "--q", "0.5", "--z", "1", "--method", method)
    series = ml_extended_pq(MLParams(1, 1, 1.2, 2.5, 0.25, 0.5), 1.0).value
    assert code == 0 and first_value(out) == pytest.approx(series, rel=1e-8)


def test_multiple_points_csv_and_structured():
    code, out = run("eval", "--alpha", "1", "--beta", "1", "--gamma", "1", "--c", "2",
                    "--z", "0", "1", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["z", "value", "abs_err_est", "effort", "status"] and len(rows) == 3
    code, out = run("eval", "--alpha", "1", "--beta", "1", "--gamma", "1", "--c", "2",
                    "--z", "0", "1", "--output", "structured")
    recs = [json.loads(line) for line in out.splitlines()]
    assert recs[1]["value"] == pytest.approx(math.e, rel=1e-13)


def test_wright_and_mellin():
    code, out = run("wright", "--upper", "1,1", "--lower", "1,1", "--z", "1")
    assert code == 0 and first_value(out) == pytest.approx(math.e, rel=1e-14)
    code, closed = run("mellin", "--alpha", "1", "--beta", "1", "--gamma", "1.2", "--c", "2.5",
                       "--s", "1.5", "--r", "2", "--z", "0.5")
    code2, numeric = run("mellin", "--alpha", "1", "--beta", "1", "--gamma", "1.2", "--c", "2.5",
                         "--s", "1.5", "--r", "2", "--z", "0.5", "--method", "numeric")
    assert code == code2 == 0
    assert first_value(closed) == pytest.approx(first_value(numeric), rel=1e-5)


def test_fracderiv():
    code, out = run("fracderiv", "--integrand", "monomial", "--param", "a=2", "--lambda", "-0.5",
                    "--x", "1")
    assert code == 0
    assert first_value(out) == pytest.approx(math.gamma(3) / math.gamma(3.5), rel=1e-13)
    code, out = run("fracderiv", "--integrand", "exponential", "--lambda", "-0.5", "--x", "1",
                    "--p", "0.3", "--q", "0.6")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["eval", "--alpha", "1"],                                          # missing flags
    ["eval", "--alpha", "x", "--beta", "1", "--gamma", "1", "--c", "2", "--z", "1"],
    ["eval", "--alpha", "-1", "--beta", "1", "--gamma", "1", "--c", "2", "--z", "1"],
    ["eval", "--alpha", "1", "--beta", "1", "--gamma", "3", "--c", "2", "--z", "1"],
    ["table", "--alpha", "1", "--beta", "1", "--gamma", "1", "--c", "2", "--z-from", "0",
     "--z-to", "1", "--steps", "0"],
    ["wright", "--upper", "1", "--z", "1"],
    ["nonsense"],
])
def test_argument_errors_exit_2(argv, capsys):
    assert main(argv, out=io.StringIO()) == 2


def test_missing_config_exit_2(tmp_path):
    code, _ = run("verify", "--config", str(tmp_path / "missing.yaml"))
    assert code == 2


def test_parse_config(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("")
    assert parse_config(p) == SuiteConfig()
    p.write_text("rel_tol: 1e-11\n")
    assert parse_config(p).rel_tol == 1e-11
    p.write_text("grid:\n  beta: []\n")
    with pytest.raises(ConfigError):
        parse_config(p)


def test_verify_selection_and_report(tmp_path):
    report = tmp_path / "out.jsonl"
    code, out = run("verify", "--only", "wright-sanity", "--report", str(report), "--quiet")
    assert code == 0
    lines = report.read_text().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["identity_id"] == "wright-sanity"
    assert "wright-sanity" in out


def test_verify_failure_exit_1(tmp_path):
    p = tmp_path / "strict.yaml"
    p.write_text("identities: [recurrence]\ntolerances:\n  recurrence: 1.0e-30\n"
                 "grid:\n  alpha: [0.5]\n  beta: [1]\n  z: [-2]\n")
    code, out = run("verify", "--config", str(p), "--quiet")
    assert code == 1
    assert "FAIL" in out


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("PQMITTAG_REL_TOL", "1e-4")
    code, loose = run("eval", "--alpha", "1", "--beta", "1", "--gamma", "1", "--c", "2", "--z", "1")
    assert code == 0
    assert first_value(loose) == pytest.approx(math.e, rel=1e-4)
    assert first_value(loose) != pytest.approx(math.e, rel=1e-12)  # fewer terms were summed
    monkeypatch.setenv("PQMITTAG_REL_TOL", "abc")
    code, _ = run("eval", "--alpha", "1", "--beta", "1", "--gamma", "1", "--c", "2", "--z", "1")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pqmittag", "beta", "--x", "2", "--y", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("0.166666666666667")
