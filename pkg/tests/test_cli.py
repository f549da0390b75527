from __future__ import annotations

import csv
import json
import math

import pytest

from widomkit import __version__
from widomkit.cli import EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, run


def _csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_tw_table_file_and_manifest(tmp_path):
    out = tmp_path / "f2.csv"
    argv = ["tw-table", "--beta", "2", "--from", "-8", "--to", "4", "--step", "0.05", "--out", str(out)]
    assert run(argv) == EXIT_OK
    rows = _csv(out)
    assert rows[0] == ["t", "F2_det", "F2_painleve", "abs_diff"]
    assert len(rows) == 1 + 241
    assert max(float(r[3]) for r in rows[1:]) <= 1e-6
    manifest = json.loads((tmp_path / "f2.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "tw-table"
    assert manifest["tool_version"] == __version__
    assert manifest["seed"] is None
    assert manifest["output_path"] == str(out)
    assert manifest["parameters"]["beta"] == "2"
    assert manifest["argv"] == argv


def test_floats_have_seventeen_digits(tmp_path):
    out = tmp_path / "g.csv"
    assert run(["sine-gap", "--x-from", "0.5", "--x-to", "1", "--step", "0.5", "--out", str(out)]) == EXIT_OK
    rows = _csv(out)
    assert rows[0] == ["x", "P", "log_P"]
    assert rows[1][0] == "0.5"
    value = rows[1][1]
    assert len(value.replace(".", "").lstrip("0")) == 17
    assert math.log(float(value)) == pytest.approx(float(rows[1][2]), rel=1e-15)


def test_json_format(tmp_path):
    out = tmp_path / "g.json"
    assert run(["sine-gap", "--domain=-1:-0.3,0.3:1", "--x-to", "1", "--step", "0.5", "--format", "json",
                "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["x", "P", "log_P"]
    assert len(doc["rows"]) == 2
    assert doc["meta"]["parameters"]["domain"] == [[-1.0, -0.3], [0.3, 1.0]]


def test_tail_constants(capsys):
    assert run(["tail-constants"]) == EXIT_OK
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert [r[0] for r in rows[1:]] == ["sine", "airy"]
    assert float(rows[1][3]) == pytest.approx(-0.43850, abs=1e-5)
    assert float(rows[2][3]) == pytest.approx(-0.13654, abs=1e-5)
    assert all(float(r[4]) <= 1e-2 for r in rows[1:])


def test_tolerance_failure_exit_code(capsys):
    assert run(["tail-constants", "--tol", "1e-9"]) == EXIT_TOLERANCE


def test_asep_exact(tmp_path):
    out = tmp_path / "p.csv"
    assert run(["asep-exact", "--p", "0.3", "--y", "0,1", "--x", "-1,2", "--t", "1.0", "--out", str(out)]) == EXIT_OK
    rows = _csv(out)
    assert rows[0] == ["probability", "imag_residue"]
    prob = float(rows[1][0])
    assert 0 <= prob <= 1 and float(rows[1][1]) <= 1e-10
    manifest = json.loads((tmp_path / "p.csv.manifest.json").read_text())
    assert manifest["parameters"]["y"] == [0, 1]
    assert manifest["metrics"]["imag_residue"] <= 1e-10


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["tw-table", "--step", "-1"], "--step"),
        (["tw-table", "--from", "3", "--to", "1"], "--to"),
        (["asep-exact", "--p", "2", "--y", "0", "--x", "0", "--t", "1"], "--p"),
        (["asep-exact", "--p", "0.3", "--y", "1,0", "--x", "0,1", "--t", "1"], "--y"),
        (["asep-exact", "--p", "0.3", "--y", "0,1", "--x", "0", "--t", "1"], "--x"),
        (["asep-exact", "--p", "0.3", "--y", "a", "--x", "0", "--t", "1"], "--y"),
        (["sample-gue", "--n", "1"], "--n"),
        (["sample-loggas", "--coeffs", "0,-1"], "--coeffs"),
        (["sine-gap", "--domain", "1:0"], "--domain"),
        (["tail-constants", "--t", "-2"], "--t"),
        (["asep-limit", "--p", "0.7"], "--p"),
        (["asep-limit", "--t", "20", "--width", "10"], "--width"),
        (["brownian-lpp", "--steps", "10"], "--steps"),
        (["selftest", "--only", "14"], "--only"),
    ],
)
def test_validation_names_the_flag(argv, flag, capsys):
    assert run(argv) == EXIT_USAGE
    assert flag in capsys.readouterr().err


def test_unknown_subcommand_and_flag(capsys):
    assert run(["bogus"]) == EXIT_USAGE
    assert run(["lis", "--bogus", "1"]) == EXIT_USAGE
    assert "--bogus" in capsys.readouterr().err


def test_seeded_output_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run(["sample-gue", "--n", "8", "--reps", "50", "--seed", "77", "--out", str(out)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert manifest["seed"] == 77
    assert "ks_to_tracy_widom" in manifest["metrics"]


def test_manifest_rerun_reproduces(tmp_path):
    out = tmp_path / "lis.csv"
    assert run(["lis", "--n", "50", "--reps", "20", "--out", str(out)]) == EXIT_OK
    manifest = json.loads((tmp_path / "lis.csv.manifest.json").read_text())
    first = out.read_bytes()
    assert manifest["seed"] == 1729
    assert run(manifest["argv"]) == EXIT_OK
    assert out.read_bytes() == first


@pytest.mark.parametrize(
    "argv, header",
    [
        (["sample-loggas", "--n", "3", "--reps", "4", "--sweeps", "50"], ["rep", "lambda_1", "lambda_2", "lambda_3"]),
        (["sample-loggas", "--quartic-t", "0.5", "--n", "2", "--reps", "2", "--sweeps", "50"], ["rep", "lambda_1", "lambda_2"]),
        (["brownian-lpp", "--n", "2", "--reps", "3"], ["rep", "M_over_sqrt_t"]),
        (["asep-sim", "--p", "0.3", "--y", "0,1", "--t", "1", "--reps", "3"], ["rep", "x_1", "x_2"]),
        (["asep-limit", "--t", "20", "--reps", "5"], ["rep", "x_m", "scaled"]),
        (["asep-limit", "--t", "20", "--reps", "5", "--init", "bernoulli"], ["rep", "x_m", "scaled"]),
        (["tw-table", "--beta", "4", "--from", "-1", "--to", "0", "--step", "0.5"], ["t", "F4_painleve"]),
    ],
)
def test_subcommand_headers(argv, header, tmp_path):
    out = tmp_path / "o.csv"
    assert run(argv + ["--out", str(out)]) == EXIT_OK
    assert _csv(out)[0] == header
    assert (tmp_path / "o.csv.manifest.json").exists()


def test_asep_exact_explicit_contour(capsys):
    assert run(["asep-exact", "--p", "0", "--y", "0", "--x", "-1", "--t", "1", "--nodes", "128"]) == EXIT_OK
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert float(rows[1][0]) == pytest.approx(math.exp(-1.0), abs=1e-12)


def test_selftest_subset(tmp_path, capsys):
    out = tmp_path / "self.csv"
    assert run(["selftest", "--only", "1,4", "--out", str(out)]) == EXIT_OK
    rows = _csv(out)
    assert [r[0] for r in rows[1:]] == ["1", "4"]
    assert all(r[2] == "true" for r in rows[1:])
    assert "[PASS] criterion  1" in capsys.readouterr().err


def test_selftest_failure_exits_nonzero():
    assert run(["selftest", "--only", "8"]) == EXIT_TOLERANCE


def test_no_partial_file_on_failure(tmp_path):
    out = tmp_path / "bad.csv"
    assert run(["tw-table", "--step", "-1", "--out", str(out)]) == EXIT_USAGE
    assert list(tmp_path.iterdir()) == []


def test_version(capsys):
    assert run(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out
