import json
import subprocess
import sys

import pytest

from cuspidal_orbits.cli import main


def run(argv, stdin, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", __import__("io").StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_irreducible(capsys, monkeypatch):
    code, out, _ = run(["classify", "--r", "2"], "[[0,1],[1,1]]", capsys, monkeypatch)
    rec = json.loads(out)
    assert code == 0 and rec["label"] == "IrredModP" and rec["verdict"] == "IsType"


def test_classify_small_conductor_is_indeterminate(capsys, monkeypatch):
    code, out, _ = run(["classify", "--r", "2"], '{"rows": [[0,1],[0,0]]}', capsys, monkeypatch)
    assert code == 2 and json.loads(out)["verdict"] == "IndeterminateSmallConductor"


def test_classify_not_type(capsys, monkeypatch):
    code, out, _ = run(["classify", "--r", "2"], "[[1,0],[0,1]]", capsys, monkeypatch)
    assert code == 0 and json.loads(out)["verdict"] == "NotType"


def test_malformed_json_exits_1(capsys, monkeypatch):
    code, _, err = run(["classify", "--r", "2"], "[[0,1],[0,", capsys, monkeypatch)
    assert code == 1 and "error" in err


def test_bad_precision_exits_1(capsys, monkeypatch):
    code, _, err = run(["classify", "--r", "1"], "[[0,1],[0,0]]", capsys, monkeypatch)
    assert code == 1


def test_atlas_csv(capsys, monkeypatch, tmp_path):
    code, out, _ = run(["atlas", "2", "2", "2", "--format", "csv"], "", capsys, monkeypatch)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 7
    target = tmp_path / "atlas.csv"
    code, _, _ = run(["atlas", "2", "2", "2", "--format", "csv", "--out", str(target)], "", capsys, monkeypatch)
    assert target.read_text() == out


def test_atlas_parallel_output_identical(capsys, monkeypatch):
    _, one, _ = run(["atlas", "2", "2", "4", "--format", "csv"], "", capsys, monkeypatch)
    _, four, _ = run(["atlas", "2", "2", "4", "--format", "csv", "--jobs", "4"], "", capsys, monkeypatch)
    assert one == four


def test_stabilizer_command(capsys, monkeypatch):
    code, out, _ = run(["stabilizer", "--r", "2"], "[[0,1],[0,0]]", capsys, monkeypatch)
    d = json.loads(out)
    assert code == 0 and d["size"] == 32 and d["formula_agrees"]


def test_companion_command(capsys, monkeypatch):
    code, out, _ = run(["companion", "--r-working", "3"], "[[0,1],[[0,1],0]]", capsys, monkeypatch)
    d = json.loads(out)
    assert code == 0 and d["companion"] == [[[0, 0, 0], [0, 1, 0]], [[1, 0, 0], [0, 0, 0]]]


def test_example4_all_pass(capsys, monkeypatch):
    code, out, _ = run(["example4", "--q", "2", "--format", "text"], "", capsys, monkeypatch)
    assert code == 0 and "FAIL" not in out and out.count("PASS") == 11


def test_selftest_quick(capsys, monkeypatch):
    code, out, _ = run(["selftest", "quick"], "", capsys, monkeypatch)
    assert code == 0 and "FAIL" not in out


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "cuspidal_orbits", "classify", "--r", "2"],
                          input="[[0,1],[1,1]]", capture_output=True, text=True)
    assert proc.returncode == 0 and "IrredModP" in proc.stdout


def test_invalid_flag_value_rejected():
    with pytest.raises(SystemExit):
        main(["atlas", "2", "2", "2", "--jobs", "0"])
