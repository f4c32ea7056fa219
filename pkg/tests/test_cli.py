import csv
import json

import pytest
import yaml

from app import main
from core.argaparse import build_arg_parser, format_full_help
from core.reports import without_timing
from scripts.run import combine_exit_codes
from scripts.spectrum import csv_path_for, metric_slug


def test_full_help_lists_every_command(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for command in ("check", "list", "inspect", "identities", "spectrum", "kuranishi", "run"):
        assert f"  {command}" in out
    assert format_full_help(build_arg_parser()).startswith("Usage:")


def test_list(suite_dir, output_dir, capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "bochner" in out and "kuranishi_obstructed" in out


def test_inspect(suite_dir, output_dir, capsys):
    assert main(["inspect", "bochner"]) == 0
    out = capsys.readouterr().out
    assert "bochner_kodaira(" in out
    assert main(["inspect", "no_such_suite"]) == 2


def test_enable_disable(suite_dir):
    assert main(["disable", "spectrum"]) == 0
    data = yaml.safe_load((suite_dir / "spectrum.yml").read_text(encoding="utf-8"))
    assert data["enabled"] is False
    assert main(["enable", "spectrum"]) == 0
    data = yaml.safe_load((suite_dir / "spectrum.yml").read_text(encoding="utf-8"))
    assert data["enabled"] is True
    assert main(["enable", "no_such_suite"]) == 2


def test_kuranishi_writes_report(output_dir, no_tty):
    assert main(["kuranishi", "--dgla", "three_element", "--order", "6", "--workers", "1"]) == 0
    data = json.loads((output_dir / "kuranishi.json").read_text(encoding="utf-8"))
    assert data["summary"]["passed"] is True
    assert data["records"][0]["solution"]["exact"] is True


def test_kuranishi_expected_obstruction(output_dir, no_tty):
    args = ["kuranishi", "--dgla", "obstructed", "--order", "4"]
    assert main(args + ["--expect-obstruction", "order=2"]) == 0
    assert main(args + ["--expect-obstruction", "order=3", "--force"]) == 1
    # unexpected obstruction fails
    assert main(args + ["--force"]) == 1


def test_kuranishi_input_errors(output_dir, no_tty):
    assert main(["kuranishi", "--dgla", "broken_leibniz"]) == 2
    assert main(["kuranishi", "--dgla", "no_such_algebra"]) == 2
    assert main(["kuranishi", "--dgla", "obstructed", "--expect-obstruction", "soon"]) == 2


def test_identities_reproducible(output_dir, no_tty):
    args = ["identities", "--check", "ricci_identities", "--m", "1", "--seeds", "2", "--workers", "1"]
    assert main(args + ["--output", str(output_dir / "a.json")]) == 0
    assert main(args + ["--output", str(output_dir / "b.json")]) == 0
    a = without_timing((output_dir / "a.json").read_text(encoding="utf-8"))
    b = without_timing((output_dir / "b.json").read_text(encoding="utf-8"))
    assert a == b
    assert a["summary"]["total"] == 2


def test_identities_bad_seeds(output_dir):
    assert main(["identities", "--check", "ricci_identities", "--seeds", "x"]) == 2


def test_spectrum_fubini_study(tmp_path, output_dir, no_tty):
    table = tmp_path / "eig.csv"
    code = main(["spectrum", "--basis", "4", "--grid", "16x32", "--samples", "2", "--pairs", "2",
                 "--workers", "1", "--csv", str(table)])
    assert code == 0
    with table.open(encoding="utf-8", newline="") as f:
        rows = list(csv.DictReader(f))
    assert {row["kind"] for row in rows} == {"functions", "forms01"}
    assert float(rows[1]["value"]) == pytest.approx(1.0, abs=1e-8)
    data = json.loads((output_dir / "spectrum.json").read_text(encoding="utf-8"))
    assert data["records"][0]["metric"] == "fubini-study"


def test_spectrum_grid_too_coarse(output_dir):
    assert main(["spectrum", "--basis", "12", "--grid", "8x16"]) == 2


def test_run_suite(suite_dir, output_dir, no_tty):
    assert main(["run", "kuranishi_obstructed"]) == 0
    data = json.loads((output_dir / "kuranishi_obstructed.json").read_text(encoding="utf-8"))
    assert data["config"]["suite"] == "kuranishi_obstructed"
    assert data["summary"]["obstruction_order"] == 2
    assert main(["run", "no_such_suite"]) == 2


def test_run_all_enabled(suite_dir, output_dir, no_tty):
    for path in suite_dir.glob("*.yml"):
        if not path.stem.startswith("kuranishi"):
            main(["disable", path.stem])
    assert main(["run", "--all"]) == 0
    assert {p.name for p in output_dir.glob("*.json")} == {
        "kuranishi_abelian.json", "kuranishi_obstructed.json", "kuranishi_three_element.json",
    }


def test_combine_exit_codes():
    assert combine_exit_codes([0, 0]) == 0
    assert combine_exit_codes([0, 1]) == 1
    assert combine_exit_codes([1, 2, 0]) == 2


def test_csv_names_per_metric(tmp_path):
    base = tmp_path / "eig.csv"
    assert csv_path_for(base, "fubini-study", True) == base
    assert metric_slug("0.1:quad") == "eps0.1-quad"
    assert csv_path_for(base, "0.1:quad", False).name == "eig.eps0.1-quad.csv"


def test_check_command(capsys):
    assert main(["check"]) == 0
    out = capsys.readouterr().out
    assert "Import self-test" in out
    assert "numpy" in out
