from __future__ import annotations

import json
import subprocess
import sys

import pytest

from logtrop.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enum_count(capsys):
    code, out, _ = call(capsys, "graphs", "enum", "--g", "0", "--n", "5")
    assert code == 0
    assert json.loads(out)["count"] == 26


def test_output_is_byte_stable(capsys):
    first = call(capsys, "moduli", "build", "--g", "1", "--n", "2")[1]
    second = call(capsys, "moduli", "build", "--g", "1", "--n", "2")[1]
    assert first == second and first.endswith("\n")


def test_dr_constant_in_genus_zero(capsys):
    code, out, err = call(capsys, "pp", "dr", "--g", "0", "--n", "3", "--a", "1,-1,0")
    assert code == 0 and err == ""
    data = json.loads(out)
    code, out, _ = call(capsys, "pp", "validate", "--class", json.dumps(data))
    assert code == 0 and json.loads(out)["ok"]


def test_dr_warns_on_nonzero_sum(capsys):
    code, _, err = call(capsys, "pp", "dr", "--g", "0", "--n", "3", "--a", "1,1,0")
    assert code == 0
    assert json.loads(err)["warning"] == "NonZeroSumWarning"


def test_class_round_trip_through_files(capsys, tmp_path):
    path = tmp_path / "l1.json"
    assert run(["pp", "make-length", "-o", str(path), "--g", "1", "--n", "2", "--leg", "1"]) == 0
    assert run(["-o", str(tmp_path / "again.json"), "pp", "make-length", "--g", "1", "--n", "2", "--leg", "1"]) == 0
    assert path.read_text() == (tmp_path / "again.json").read_text()
    capsys.readouterr()
    code, out, _ = call(capsys, "pp", "mul", "--left", str(path), "--right", str(path))
    assert code == 0
    squared = json.loads(out)
    code, out, _ = call(capsys, "pp", "pullback", "--morphism", "forget:1,2", "--class", json.dumps(squared))
    assert code == 0 and json.loads(out)["stack"]


def test_cohft_trivial_spec(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "constant"}))
    code, out, _ = call(capsys, "cohft", "check", "--spec", str(spec), "--axioms", "sep,loop", "--envelope", "g<=1,n<=3")
    assert code == 0 and json.loads(out)["passed"]


def test_cohft_failure_exit_code(capsys):
    code, out, _ = call(capsys, "cohft", "check", "--spec", '{"kind": "dr", "window": 1}', "--axioms", "loop",
                        "--envelope", "g<=1,n<=2")
    assert code == 2
    assert not json.loads(out)["passed"]


def test_errors_are_json_on_stderr(capsys):
    code, out, err = call(capsys, "graphs", "enum", "--g", "0", "--n", "2")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "UnstableSignature"
    code, _, err = call(capsys, "pp", "validate", "--class", "not json at all")
    assert code == 1 and json.loads(err)["error"] == "UsageError"


def test_invalid_graph_lists_codes(capsys):
    raw = json.dumps({"genus": 0, "vertices": [{"id": 0, "genus": 0}], "edges": [], "legs": [0, 0]})
    code, out, _ = call(capsys, "graphs", "validate", "--graph", raw)
    assert code == 2
    report = json.loads(out)
    assert not report["valid"] and "UnstableVertex" in {i["code"] for i in report["issues"]}


def test_fan_commands(capsys):
    line = json.dumps({"rank": 1, "cones": [{"rays": [[1]]}, {"rays": [[-1]]}]})
    code, out, _ = call(capsys, "fan", "chow", "--fan", line)
    assert code == 0 and json.loads(out)["dimensions"] == [1, 1]
    code, out, _ = call(capsys, "fan", "probe", "--cone", "rank2", "--script", "[[1, 1], [2, 1]]")
    assert code == 0
    assert [s["dimensions"][1] for s in json.loads(out)["steps"]] == [2, 3, 4]


def test_square_and_monoid(capsys):
    code, out, _ = call(capsys, "divtrop", "square", "--g1", "0", "--n1", "2", "--g2", "0", "--n2", "2",
                        "--a", "1,1,-1,-1", "--bound", "3")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = call(capsys, "divtrop", "monoid", "--k", "1", "--l1", "1", "--l2", "1", "--box", "5")
    assert code == 0 and json.loads(out)["box_check"]["agrees"]


@pytest.mark.parametrize("argv", [["--help"], ["graphs", "--help"]])
def test_help(argv, capsys):
    assert run(argv) == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logtrop", "graphs", "enum", "--g", "1", "--n", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 2
