from __future__ import annotations

import json
from fractions import Fraction
import subprocess
import sys

import jsonschema
import pytest

from whittaker_lab.cli import ConfigError, main, parse_config, report_schema


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


@pytest.mark.parametrize("argv", [
    ["verify-iso", "--n", "2", "--deg", "2"],
    ["whittaker", "--n", "2", "--a", "1,2", "--module", "exterior:1", "--deg", "2", "--trials", "3"],
    ["whittaker", "--n", "2", "--a", "0,1", "--deg", "2"],
    ["bracket", "--n", "2", "--x", "t1^2*d1", "--y", "t2*d1 + 3*d2"],
    ["phi", "--n", "2", "--gen", "t1^2*d2"],
    ["phi", "--n", "1", "--deg", "1"],
    ["decompose", "--n", "1", "--a", "2", "--element", "t1"],
    ["omega", "--n", "1", "--deg", "1"],
    ["complex", "--n", "1", "--a", "0", "--deg", "3"],
    ["complex", "--n", "2", "--a", "1,-1", "--deg", "2", "--trials", "2"],
    ["weighting", "--n", "1", "--a", "1", "--deg", "3", "--grid", "-2:2"],
    ["all", "--criteria", "9"],
])
def test_reports_validate_and_pass(capsys, argv):
    code, report, err = run_cli(capsys, *argv)
    jsonschema.validate(report, report_schema())
    assert code == 0 and report["passed"], err
    assert err.strip().endswith("PASS")


def test_example_results(capsys):
    _, rep, _ = run_cli(capsys, "whittaker", "--n", "2", "--a", "1,2", "--module", "exterior:1",
                        "--deg", "4", "--trials", "2")
    assert rep["results"]["dim_whittaker"] == 2
    assert rep["results"]["k_table"][1:3] == [{"m": [0, 1], "k": "2"}, {"m": [1, 0], "k": "1"}]
    _, rep, _ = run_cli(capsys, "complex", "--n", "1", "--a", "0", "--deg", "3")
    assert rep["results"]["mode"] == "singular-defect"
    assert rep["results"]["stages"][0]["defect"] == 1
    _, rep, _ = run_cli(capsys, "decompose", "--n", "1", "--a", "2", "--element", "t1")
    assert rep["results"]["coefficients"] == [{"m": [1], "v": 1, "coeff": "1/2"}]
    _, rep, _ = run_cli(capsys, "bracket", "--n", "1", "--x", "d1", "--y", "t1^2*d1")
    assert rep["results"]["bracket"] == "2*t1*d1"


def test_deterministic_modulo_timing(capsys):
    argv = ["complex", "--n", "2", "--a", "1,1/2", "--deg", "2", "--trials", "2", "--seed", "4"]
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert json.dumps(strip_timing(first)) == json.dumps(strip_timing(second))
    assert set(first["timing"]) == {"total_seconds"}


def test_flag_parsing_examples():
    cfg = parse_config("whittaker", {"a": "1,1/2", "module": "exterior:2"})
    assert cfg.n == 2 and cfg.a == (1, Fraction(1, 2)) and cfg.module == "exterior:2"
    assert parse_config("complex", {"n": "3"}).a == (1, 1, 1)


@pytest.mark.parametrize("argv,fragment", [
    (["whittaker", "--a", "1//2"], "a[1]: malformed rational '1//2'"),
    (["decompose", "--n", "2", "--a", "0,1", "--element", "v1"], "nonsingular"),
    (["whittaker", "--n", "2", "--a", "1"], "expected n=2"),
    (["whittaker", "--n", "0"], "n: must be >= 1"),
    (["whittaker", "--n", "2", "--module", "exterior:5"], "module"),
    (["weighting", "--n", "1", "--deg", "2", "--max-deg", "2"], "need D >= 3"),
    (["bracket", "--n", "1", "--x", "t1"], "needs --x and --y"),
    (["all", "--criteria", "10"], "unknown criterion 10"),
])
def test_invalid_input_exits_2(capsys, argv, fragment):
    code, report, err = run_cli(capsys, *argv)
    assert code == 2 and report is None
    assert fragment in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("task: whittaker\nn: 2\na: [1, 2]\nmodule: exterior:1\ndeg: 1\ntrials: 2\n")
    code, rep, _ = run_cli(capsys, "whittaker", "--config", str(cfg), "--deg", "2")
    assert code == 0 and rep["config"]["deg"] == 2 and rep["config"]["a"] == ["1", "2"]
    js = tmp_path / "run.json"
    js.write_text(json.dumps({"n": 1, "a": ["3/2"], "deg": 1}))
    code, rep, _ = run_cli(capsys, "complex", "--config", str(js))
    assert code == 0 and rep["config"]["a"] == ["3/2"]


def test_config_diagnostics_name_the_line(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("n: 2\ncolour: blue\n")
    code, _, err = run_cli(capsys, "whittaker", "--config", str(cfg))
    assert code == 2 and f"{cfg}:2: unknown field 'colour'" in err
    cfg.write_text("n: 2\na: 1,1//2\n")
    code, _, err = run_cli(capsys, "whittaker", "--config", str(cfg))
    assert code == 2 and f"{cfg}:2: a[2]" in err
    cfg.write_text("task: complex\nn: 1\n")
    with pytest.raises(ConfigError, match="does not match"):
        parse_config("whittaker", {}, str(cfg))


def test_custom_module_in_config(tmp_path, capsys):
    cfg = tmp_path / "custom.yaml"
    cfg.write_text("n: 1\na: [1]\ndeg: 2\nmodule:\n  type: custom\n  dim: 1\n  E:\n    '1,1': [[2]]\n")
    code, rep, _ = run_cli(capsys, "whittaker", "--config", str(cfg), "--trials", "2")
    assert code == 0
    assert rep["config"]["module"] == {"type": "custom", "dim": 1, "E": {"1,1": [["2"]]}}


def test_failing_check_exits_1(capsys):
    # omega needs m = 2, so capping the search at 1 must fail
    code, rep, _ = run_cli(capsys, "omega", "--n", "1", "--deg", "1", "--m-max", "1")
    assert code == 1 and rep["passed"] is False and rep["results"]["found"] is False


def test_out_file_and_console_script(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "whittaker_lab.cli", "verify-iso", "--n", "1",
                           "--deg", "1", "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
    jsonschema.validate(json.loads(out.read_text()), report_schema())
