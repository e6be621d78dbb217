import json
import subprocess
import sys

import pytest

from flagrock.cli import EXIT_CONSISTENCY, EXIT_INVALID, EXIT_OK, main
from flagrock.report import ReportSchema, validate


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_json_validates_and_round_trips(capsys):
    code, out, _ = run(capsys, "analyze", "2", "2", "1", "--format", "json")
    assert code == EXIT_OK
    d = json.loads(out)
    validate(d)
    assert d["verdict"]["rockland_fails"] is True
    assert [w["degree"] for w in d["witnesses"]] == [1, 2]
    back = ReportSchema.from_dict(d)
    assert json.loads(back.to_json()) == d


def test_analyze_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "analyze", "--p", "3", "--q", "1", "--p1", "1", "--format", "json")
        d = json.loads(out)
        d.pop("timing")
        outs.append(d)
    assert outs[0] == outs[1]


def test_text_report(capsys):
    _, text, _ = run(capsys, "analyze", "2", "2", "1", "--no-crosscheck")
    assert "witness: degree 1" in text and "witness: degree 2" in text
    assert "Rockland condition fails" in text


def test_degenerate_exits_zero(capsys):
    code, out, _ = run(capsys, "analyze", "1", "1", "1", "--format", "json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["case"] == "degenerate" and d["verdict"]["rockland_fails"] is None


@pytest.mark.parametrize("argv", [
    ["analyze", "2", "2", "3"],
    ["analyze", "0", "2", "1"],
    ["analyze", "2", "2"],
    ["analyze", "2", "2", "1", "--p", "2"],
    ["analyze", "--p", "2", "--q", "2"],
    ["analyze", "2", "2", "1", "--weights", "-1"],
    ["analyze", "2", "2", "1", "--weights", "1,2"],
    ["analyze", "2", "2", "1", "--weights", "banana"],
    ["analyze", "x", "2", "1"],
    ["scan", "--max-n", "1"],
    ["bogus"],
])
def test_invalid_input_exits_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INVALID
    assert err


def test_weights_flag(capsys):
    code, out, _ = run(capsys, "analyze", "2", "2", "1", "--weights", "2", "--format", "json",
                       "--no-crosscheck")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["r_values"][0]["r"]["exact"] is not None
    assert [w["degree"] for w in d["witnesses"]] == [1, 2]


@pytest.mark.parametrize("value", ["zero", "0"])
def test_bad_thread_count(capsys, monkeypatch, value):
    monkeypatch.setenv("FLAGROCK_THREADS", value)
    code, _, _ = run(capsys, "scan", "--max-n", "3")
    assert code == EXIT_INVALID


def test_scan(capsys, monkeypatch):
    monkeypatch.setenv("FLAGROCK_THREADS", "1")
    code, out, _ = run(capsys, "scan", "--max-n", "4", "--format", "json")
    assert code == EXIT_OK
    d = json.loads(out)
    validate(d)
    row = next(r for r in d["rows"] if (r["p"], r["q"], r["p1"]) == (2, 2, 1))
    assert row["witness_degrees"] == [1, 2] and row["rockland_fails"] is True
    code, out, _ = run(capsys, "scan", "--max-n", "2", "--format", "json")
    d = json.loads(out)
    assert [r["case"] for r in d["rows"]] == ["degenerate"]


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "analyze", "2", "2", "1", "--format", "json", "-o", str(target))
    assert code == EXIT_OK and out == ""
    validate(json.loads(target.read_text()))
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".flagrock-")]


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--max-n", "4")
    assert code == EXIT_OK
    assert "selftest passed" in out


def test_selftest_fault_injection(capsys):
    code, _, err = run(capsys, "selftest", "--max-n", "3", "--inject-fault", "structure-constants")
    assert code == EXIT_CONSISTENCY
    assert "[structure-constants]" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flagrock", "analyze", "2", "2", "2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "verdict: not applicable" in proc.stdout
