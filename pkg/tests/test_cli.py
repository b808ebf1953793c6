import csv
import io
import json
import math

import pytest
from typer.testing import CliRunner

from apps.cli.main import app

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, list(args))


def test_constants_json_report(tmp_path):
    out = tmp_path / "constants.json"
    result = invoke("constants", "--s", "0.5", "--n", "2", "--out", str(out))
    assert result.exit_code == 0, result.output
    document = json.loads(out.read_text())
    assert list(document) == ["version", "config", "reports"]
    assert document["config"]["s_grid"] == [0.5]
    report = document["reports"][0]
    assert report["check"] == "constants" and report["passed"]
    assert report["report"]["dbar"] == pytest.approx(0.6366197724, abs=1e-10)
    assert max(report["report"]["residuals"].values()) <= 1e-12


def test_constants_over_a_range(tmp_path):
    out = tmp_path / "constants.json"
    result = invoke("constants", "--s", "0.1:0.9:9", "--out", str(out))
    assert result.exit_code == 0, result.output
    reports = json.loads(out.read_text())["reports"]
    assert [r["s"] for r in reports] == pytest.approx([0.1 * k for k in range(1, 10)])


def test_profile_csv_table(tmp_path):
    out = tmp_path / "profile_A.csv"
    result = invoke("profile", "--kind", "A", "--s", "0.5", "--t-max", "2", "--format", "csv", "--out", str(out))
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert list(rows[0]) == ["s", "t", "value", "derivative"]
    assert len(rows) == 40
    at_one = next(r for r in rows if float(r["t"]) == 1.0)
    assert float(at_one["value"]) == pytest.approx(0.5, rel=1e-12)
    assert float(at_one["derivative"]) == pytest.approx(-1.0 / math.pi, rel=1e-11)


def test_profile_json_embeds_table(tmp_path):
    out = tmp_path / "profile_T.json"
    result = invoke("profile", "--kind", "T", "--s", "0.5", "--t-max", "1", "--out", str(out))
    assert result.exit_code == 0, result.output
    report = json.loads(out.read_text())["reports"][0]
    assert report["check"] == "profile_T"
    last = report["report"]["table"][-1]
    assert last["value"] == pytest.approx(math.exp(-1.0), rel=1e-12)


@pytest.mark.parametrize("value", ["abc", "1.5", "0", "0.2:0.4"])
def test_bad_orders_are_usage_errors(value):
    result = invoke("constants", "--s", value)
    assert result.exit_code == 2


def test_unwritable_output(tmp_path):
    result = invoke("constants", "--s", "0.5", "--out", str(tmp_path / "missing" / "report.json"))
    assert result.exit_code == 3


def test_reports_are_reproducible(tmp_path):
    out = tmp_path / "constants.csv"
    invoke("constants", "--s", "0.3,0.7", "--format", "csv", "--out", str(out))
    first = out.read_bytes()
    invoke("constants", "--s", "0.3,0.7", "--format", "csv", "--out", str(out))
    assert out.read_bytes() == first
    assert b"\r\n" not in first


def test_summary_goes_to_output_with_file(tmp_path):
    result = invoke("constants", "--s", "0.5", "--out", str(tmp_path / "c.json"))
    assert "[PASS] constants" in result.output
    assert "1/1 checks passed" in result.output


@pytest.mark.slow
def test_quick_lemma_run(tmp_path):
    out = tmp_path / "lemmas.csv"
    result = invoke("lemmas", "--quick", "--samples", "1", "--bumps", "1", "--format", "csv", "--out", str(out))
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 6
    assert all(float(r["margin"]) >= -1e-8 for r in rows)
