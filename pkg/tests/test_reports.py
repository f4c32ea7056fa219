import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from core import constants
from core.reports import (
    RunReport,
    _json_default,
    confirm_overwrite,
    default_output_path,
    dumps_report,
    without_timing,
    write_csv,
    write_json_report,
)


def _report(**summary):
    report = RunReport(command="kuranishi", config={"command": "kuranishi", "dgla": "abelian"})
    report.records = [{"dgla": "abelian", "value": np.float64(0.5)}]
    report.summary = {"passed": True, **summary}
    return report.finish()


def test_report_layout():
    data = json.loads(dumps_report(_report()))
    assert list(data) == ["schema", "tool_version", "command", "config", "records", "summary", "timing"]
    assert data["schema"] == constants.REPORT_SCHEMA
    assert data["records"][0]["value"] == 0.5
    assert set(data["timing"]) == {"timestamp", "wall_time_s"}


def test_reports_differ_only_in_timing():
    first, second = _report(), _report()
    second.started += 10.0
    assert dumps_report(first) != dumps_report(second)
    assert without_timing(dumps_report(first)) == without_timing(dumps_report(second))


def test_passed_follows_summary():
    assert _report().passed
    report = RunReport(command="identities", config={})
    assert not report.passed


def test_json_default():
    assert _json_default(np.int64(3)) == 3
    assert _json_default(np.arange(2)) == [0, 1]
    assert _json_default(Fraction(1, 3)) == "1/3"
    assert _json_default(1 + 2j) == [1.0, 2.0]
    assert _json_default(Path("a/b")) == str(Path("a/b"))
    with pytest.raises(TypeError):
        _json_default(object())


def test_default_output_path(output_dir):
    assert default_output_path("bochner") == output_dir / "bochner.json"
    assert default_output_path("spectrum", ".csv") == output_dir / "spectrum.csv"


def test_write_json_report_creates_directories(tmp_path):
    path = tmp_path / "nested" / "report.json"
    assert write_json_report(_report(), path) == path
    assert json.loads(path.read_text(encoding="utf-8"))["command"] == "kuranishi"


def test_overwrite_without_terminal_proceeds(tmp_path, no_tty):
    path = tmp_path / "report.json"
    path.write_text("{}", encoding="utf-8")
    assert confirm_overwrite(path)
    write_json_report(_report(), path)
    assert "schema" in json.loads(path.read_text(encoding="utf-8"))


def test_declined_overwrite_keeps_file(tmp_path, monkeypatch, capsys):
    path = tmp_path / "report.json"
    path.write_text("{}", encoding="utf-8")
    monkeypatch.setattr("core.reports.confirm_overwrite", lambda p, force=False: False)
    assert write_json_report(_report(), path) is None
    assert path.read_text(encoding="utf-8") == "{}"
    assert "Kept existing file" in capsys.readouterr().out


def test_force_skips_prompt(tmp_path):
    path = tmp_path / "report.json"
    path.write_text("{}", encoding="utf-8")
    assert confirm_overwrite(path, force=True)


def test_write_csv_columns(tmp_path):
    rows = [
        {"index": 0, "value": np.float64(0.0), "cluster": 0, "residual": 1e-15, "kind": "functions"},
        {"index": 1, "value": 1.0, "cluster": 1, "residual": 2e-15, "kind": "functions", "extra": "dropped"},
    ]
    path = write_csv(rows, tmp_path / "eigenvalues.csv")
    with path.open(encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        assert reader.fieldnames == list(constants.CSV_COLUMNS)
        parsed = list(reader)
    assert [row["value"] for row in parsed] == ["0.0", "1.0"]
    assert "extra" not in parsed[1]
