import io
import json
import os
import sys

import pytest

from distpart.cli import main

PARTITION = "shape 2 2\ncell 0:0 1:0\ncell 0:1\ncell 1:1\n"


@pytest.fixture(autouse=True)
def _no_budget_leak():
    before = os.environ.get("DISTPART_BUDGET")
    yield
    assert os.environ.get("DISTPART_BUDGET") == before


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--n1", "4", "--m2", "3")
    assert code == 0 and out.strip() == "j=0 k=1 r=8/3"


def test_params_json_lines(capsys):
    code, out, _ = run(capsys, "params", "--n1", "4", "--m2", "3", "--format", "json-lines")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and rows[0]["j"] == 0 and rows[0]["k"] == 1 and rows[0]["r"] == "8/3"


def test_construct_pipes_into_verify(capsys, monkeypatch):
    code, out, _ = run(capsys, "construct", "m2-2", "--m1", "6")
    assert code == 0
    assert "# n2 13/1" in out and "# cert ok group_order=1" in out
    code, out2, _ = run(capsys, "verify", "-", stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and out2.strip() == "cert ok group_order=1"


def test_verify_reports_symmetry(capsys, monkeypatch):
    text = "m2 1\nvertex 0 1\nvertex 1 1\nedge 0 0 1\n"
    code, out, _ = run(capsys, "verify", "-", "--label-preserving", stdin=text, monkeypatch=monkeypatch)
    assert "group_order=2" in out


def test_tau_round_trip(capsys, monkeypatch):
    code, h, _ = run(capsys, "tau", "-", stdin=PARTITION, monkeypatch=monkeypatch)
    assert code == 0 and "edge 0 0 1" in h
    code, back, _ = run(capsys, "tau", "--inverse", "-", stdin=h, monkeypatch=monkeypatch)
    assert back.strip() == PARTITION.strip()


def test_count_trees(capsys):
    code, out, _ = run(capsys, "count-trees", "--max-edges", "8")
    rows = [line.split() for line in out.splitlines()]
    assert code == 0 and [int(r[1]) for r in rows] == [1, 0, 0, 0, 0, 0, 1, 1, 3]


def test_oracle_max_n2_witness_verifies(capsys, monkeypatch):
    code, out, _ = run(capsys, "oracle", "max-n2", "--m1", "2", "--n1", "2", "--m2", "1")
    assert code == 0 and out.startswith("# max_n2 3")
    code, cert, _ = run(capsys, "verify", "-", stdin=out, monkeypatch=monkeypatch)
    assert "cert ok" in cert


def test_oracle_fixtures_file(capsys, tmp_path):
    path = tmp_path / "fx.json"
    code, _, _ = run(capsys, "oracle", "fixtures", "--triples", "2,2,1;3,2,1", "--fixtures-out", str(path))
    assert code == 0
    assert [r["max_n2"] for r in json.loads(path.read_text())] == [3, 4]


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--n1", "3", "--m2", "4")
    assert code == 0 and out.startswith("C=32/3 case=j0")


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "oracle", "max-n2", "--m1", "4", "--n1", "3", "--m2", "2",
                       "--budget-nodes", "5")
    assert code == 2 and "budget" in err


def test_precondition_exit_code(capsys):
    code, _, err = run(capsys, "construct", "m2-2", "--m1", "3")
    assert code == 1 and "TooFewEdges" in err


def test_bad_input_exit_code(capsys, monkeypatch):
    code, _, err = run(capsys, "verify", "-", stdin="m2 1\nbogus\n", monkeypatch=monkeypatch)
    assert code == 1 and "FormatError" in err


def test_deterministic_output(capsys):
    first = run(capsys, "construct", "k1", "--m1", "14", "--n1", "4", "--m2", "2", "--seed", "5")
    second = run(capsys, "construct", "k1", "--m1", "14", "--n1", "4", "--m2", "2", "--seed", "5")
    assert first == second and first[0] == 0


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        main(["nope"])
