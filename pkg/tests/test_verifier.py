import json
import math

import numpy as np
import pytest

from pqmittag import verifier
from pqmittag.verifier import (ConfigError, GridSpec, IdentityReport, SuiteConfig, load_config,
                               report_json, run_full_suite, summary_table, verify_integral_reps,
                               verify_recurrence, write_reports)

ONE_TUPLE = GridSpec(alpha=(0.8,), beta=(1.3,), pq=((0.3, 0.6),), z=(0.7,))


def test_report_invariants():
    rep = verifier._report("x", [1e-12, 3e-10, 2e-11], 1e-9)
    assert rep.passed and rep.grid_size == 3
    assert rep.median_rel_err <= rep.max_rel_err == 3e-10
    bad = verifier._report("x", [1e-12, float("nan")], 1e-9)
    assert not bad.passed and math.isinf(bad.max_rel_err)


def test_single_tuple_grid():
    rep = verify_integral_reps(ONE_TUPLE)
    assert rep.grid_size == 1 and rep.passed


def test_prabhakar_slice_near_zero_error():
    grid = GridSpec(pq=((0.0, 0.0),))
    rep = verify_integral_reps(grid)
    assert rep.max_rel_err <= 1e-10
    assert verify_recurrence(grid, tol=1e-10).passed


def test_recurrence_zero_argument():
    rep = verify_recurrence(GridSpec(z=(0.0,)))
    assert rep.max_rel_err <= 1e-15


def test_grid_validation():
    with pytest.raises(ConfigError):
        GridSpec(z=())
    with pytest.raises(ConfigError):
        GridSpec(gamma=(3.0,), c=(2.5,))
    assert len(GridSpec()) == 270


def test_failing_tuple_is_recorded_not_fatal(monkeypatch):
    calls = {"n": 0}
    real = verifier.ml_recurrence_residual

    def flaky(params, z, *a, **k):
        calls["n"] += 1
        if calls["n"] == 2:
            raise RuntimeError("boom")
        return real(params, z, *a, **k)
    monkeypatch.setattr(verifier, "ml_recurrence_residual", flaky)
    rep = verify_recurrence(GridSpec(alpha=(1.0,), beta=(1.0,), pq=((0.0, 0.0),), z=(0.1, 0.2, 0.3)))
    assert rep.grid_size == 3
    assert not rep.passed and "boom" in rep.notes


class TestConfig:
    def test_empty_file_defaults(self, tmp_path):
        p = tmp_path / "c.yaml"
        p.write_text("")
        assert load_config(p) == SuiteConfig()

    def test_only_rel_tol(self):
        conf = load_config(text="rel_tol: 1.0e-10\n")
        assert conf.rel_tol == 1e-10
        assert conf.grid == GridSpec() and conf.tolerances == verifier.DEFAULT_TOLERANCES

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "nope.yaml")

    def test_empty_grid_list(self):
        with pytest.raises(ConfigError, match=r"grid\.z.*line 3"):
            load_config(text="grid:\n  alpha: [1.0]\n  z: []\n")

    def test_unknown_field_reports_line(self):
        with pytest.raises(ConfigError, match=r"'bogus' \(line 2\)"):
            load_config(text="rel_tol: 1e-9\nbogus: 3\n")

    def test_bad_number(self):
        with pytest.raises(ConfigError, match="rel_tol"):
            load_config(text="rel_tol: fast\n")

    def test_invalid_grid_tuple(self):
        with pytest.raises(ConfigError, match="c > gamma"):
            load_config(text="grid:\n  gamma: [3.0]\n")

    def test_full_config(self):
        conf = load_config(text=(
            "grid:\n  alpha: [1]\n  beta: [1, 2]\n  pq: [[0, 0], [0.5, 0.25]]\n  z: [0.5]\n"
            "tolerances:\n  recurrence: 1e-8\n"
            "identities: [recurrence, wright-sanity]\nseed: 3\n"))
        assert conf.grid.pq == ((0.0, 0.0), (0.5, 0.25))
        assert conf.tolerances["recurrence"] == 1e-8
        assert conf.identities == ("recurrence", "wright-sanity")

    def test_unknown_identity(self):
        with pytest.raises(ConfigError, match="unknown identity"):
            load_config(text="identities: [everything]\n")

    def test_invalid_yaml(self):
        with pytest.raises(ConfigError):
            load_config(text="grid: [1, 2\n")


def test_single_identity_selection():
    reps = run_full_suite(only=["wright-sanity"])
    assert [r.identity_id for r in reps] == ["wright-sanity"]


def test_deterministic_reports():
    conf = SuiteConfig(grid=ONE_TUPLE)
    ids = ["integral-representations", "recurrence", "extended-beta-properties", "wright-sanity"]
    a = [report_json(r) for r in run_full_suite(conf=conf, only=ids)]
    b = [report_json(r) for r in run_full_suite(conf=conf, only=ids)]
    assert a == b


def test_jsonl_output(tmp_path):
    reps = [IdentityReport("a", 3, 1 / 3, 0.1, 1e-9, False, "n"),
            IdentityReport("b", 1, 0.0, 0.0, 1e-9, True)]
    path = tmp_path / "r.jsonl"
    write_reports(reps, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 2
    rec = json.loads(lines[0])
    assert list(rec) == ["identity_id", "grid_size", "max_rel_err", "median_rel_err", "tolerance",
                         "pass", "notes"]
    assert rec["max_rel_err"] == 1 / 3
    assert "0.33333333333333331" in lines[0]  # 17 significant digits


def test_summary_table_lists_all():
    reps = [IdentityReport("a", 3, 1e-12, 1e-13, 1e-9, True)]
    assert "a" in summary_table(reps) and "pass" in summary_table(reps)


def test_derivative_report_notes_quantify_variant_forms():
    rep = verifier.verify_derivative_theorems(
        grid=GridSpec(alpha=(1.0,), beta=(1.0,), pq=((0.3, 0.6),), z=(0.7,)), n_values=(1,))
    assert rep.passed
    assert "(c)_n weight" in rep.notes and "c/gamma" in rep.notes


def test_sample_config_matches_defaults():
    from pathlib import Path
    sample = Path(__file__).parent.parent / "demos" / "verify_config.yaml"
    assert load_config(sample) == SuiteConfig()
