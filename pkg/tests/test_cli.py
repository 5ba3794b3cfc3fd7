import json
import subprocess
import sys

import pytest

from tspchain.cli import main
from tspchain.core import format_matrix, CostMatrix
from tspchain.fixtures import C_STAR, C_X
from tspchain.septree import dumps_trace, loads_trace, replay_check


@pytest.fixture
def cstar_file(tmp_path):
    p = tmp_path / "cstar.txt"
    p.write_text(format_matrix(CostMatrix.from_rows(C_STAR)))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_cstar(capsys, cstar_file, tmp_path):
    trace_path = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "solve", "--matrix", cstar_file, "--trace-out", str(trace_path))
    assert code == 0
    assert "tour: 1 -> 2 -> 3 -> 4 -> 1" in out and "length: 0" in out
    text = trace_path.read_text()
    trace = loads_trace(text)
    assert dumps_trace(trace) == text
    assert replay_check(trace, CostMatrix.from_rows(C_STAR))


def test_solve_filtered_trace(capsys, cstar_file, tmp_path):
    trace_path = tmp_path / "t.jsonl"
    run(capsys, "solve", "--matrix", cstar_file, "--trace-out", str(trace_path), "--filter-trivial")
    assert all(not e.trivial for e in loads_trace(trace_path.read_text()).events)


def test_solve_cx_structured(capsys, tmp_path):
    p = tmp_path / "cx.json"
    p.write_text(format_matrix(CostMatrix.from_rows(C_X), structured=True))
    code, out, _ = run(capsys, "solve", "--matrix", str(p), "--format", "structured")
    assert code == 0 and json.loads(out)["length"] == 5


@pytest.mark.parametrize("content", ["2\n- 1\n1 -\n", "3\n- 1\n", "not a matrix"])
def test_solve_bad_input(capsys, tmp_path, content):
    p = tmp_path / "bad.txt"
    p.write_text(content)
    code, _, err = run(capsys, "solve", "--matrix", str(p))
    assert code == 2 and "error" in err


def test_solve_missing_file(capsys, tmp_path):
    assert run(capsys, "solve", "--matrix", str(tmp_path / "nope.txt"))[0] == 2


def test_audit_builtin(capsys):
    code, out, _ = run(capsys, "audit", "section4")
    assert code == 0 and "overall: PASS" in out
    code, out, _ = run(capsys, "audit", "section5", "--format", "structured")
    assert code == 0 and json.loads(out)["items"][-1]["evidence"] == {"verdict": "VIOLATES(*)"}


def test_audit_chain(capsys, cstar_file):
    code, out, _ = run(capsys, "audit", "chain", "--matrix", cstar_file, "--tour", "1 2 3 4")
    assert code == 1 and "degenerate" in out
    code, out, _ = run(capsys, "audit", "chain", "--matrix", cstar_file, "--tour", "1 4 2 3")
    assert code == 0 and "VIOLATES(*)" in out
    assert run(capsys, "audit", "chain", "--matrix", cstar_file, "--tour", "1 2 3")[0] == 2
    assert run(capsys, "audit", "chain", "--matrix", cstar_file)[0] == 2


def test_audit_lemma1(capsys):
    code, out, _ = run(capsys, "audit", "lemma1", "--seed", "2", "--cases", "30", "--n", "4")
    assert code == 0 and "30/30" in out
    assert run(capsys, "audit", "lemma1", "--n", "7")[0] == 2


def test_enumerate(capsys, cstar_file):
    code, out, _ = run(capsys, "enumerate", "--n", "5")
    assert code == 0 and len(out.splitlines()) == 24
    code, out, _ = run(capsys, "enumerate", "--matrix", cstar_file)
    lengths = sorted(int(line.split("\t")[1]) for line in out.splitlines())
    assert lengths[:2] == [0, 3] and len(lengths) == 6
    assert run(capsys, "enumerate", "--n", "9")[0] == 2
    assert run(capsys, "enumerate")[0] == 2


def test_adjacency(capsys):
    code, out, _ = run(capsys, "adjacency", "--n", "4")
    assert code == 0 and out.splitlines()[-1].startswith("15/15 adjacent")
    code, out, _ = run(capsys, "adjacency", "--n", "5", "--format", "structured")
    data = json.loads(out)
    assert data["adjacent"] == data["pairs"] == 276
    assert run(capsys, "adjacency", "--n", "7")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "audit", "section9")[0] == 2


def test_outputs_are_byte_identical(capsys, cstar_file):
    first = run(capsys, "audit", "chain", "--matrix", cstar_file, "--tour", "1 4 2 3",
                "--format", "structured")
    second = run(capsys, "audit", "chain", "--matrix", cstar_file, "--tour", "1 4 2 3",
                 "--format", "structured")
    assert first == second


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tspchain", "audit", "section5"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "overall: PASS" in res.stdout
