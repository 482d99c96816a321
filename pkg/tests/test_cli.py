import json
import subprocess
import sys

import pytest

from kfiltration import alexander
from kfiltration.cli import main
from kfiltration.laurent import LaurentPoly
from kfiltration.staircase import Staircase, StairSum


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_alexander_torus(capsys):
    status, out, _ = run(capsys, "alexander", "torus", "-p", "2", "-q", "5")
    assert (status, out) == (0, "1 - t + t^2 - t^3 + t^4\n")


def test_alexander_json_round_trips(capsys):
    status, out, _ = run(capsys, "alexander", "closed-form", "np1", "-p", "3", "-n", "2", "--format", "json")
    assert status == 0
    assert LaurentPoly.from_json(json.loads(out)) == alexander.torus_alexander(3, 7)


def test_staircase_text_and_json(capsys):
    assert run(capsys, "staircase", "torus", "-p", "3", "-q", "4")[1] == "(1, 2)\n"
    status, out, _ = run(capsys, "staircase", "torus", "-p", "3", "-q", "4", "--format", "json")
    assert json.loads(out) == {"half": [1, 2]}
    assert Staircase.from_json(json.loads(out)) == Staircase.of(1, 2)


def test_claimed_decomposition(capsys):
    status, out, _ = run(capsys, "staircase", "torus", "-p", "4", "-q", "7", "--claimed", "--format", "json")
    assert StairSum.from_json(json.loads(out)) == StairSum({Staircase.of(1, 2): 1, Staircase.of(1, 3): 1, Staircase.of(2): 1})


def test_verify_example(capsys):
    status, out, _ = run(capsys, "verify", "prop", "3.4", "-p", "2", "-n", "2")
    assert status == 0
    assert out.splitlines()[0] == "prop3.4 p=2 n=2: confirmed"


def test_verify_lemma_json(capsys):
    status, out, _ = run(capsys, "verify", "lemma", "2.4", "-a", "1,3", "-b", "2,1", "--format", "json")
    doc = json.loads(out)
    assert status == 0 and doc["verdict"] == "confirmed" and doc["params"] == {"a": [1, 3], "b": [2, 1]}


def test_invariants_and_compare(capsys):
    status, out, _ = run(capsys, "invariants", "(1, 1) - (1)", "--basis", "--format", "json")
    doc = json.loads(out)
    assert status == 0 and doc["epsilon"] == doc["epsilon_by_basis"] == 1
    status, out, _ = run(capsys, "compare", "(1, 3)", "(2, 1)", "--dominates")
    assert out.splitlines()[0] == "greater" and "all greater" in out


def test_complex_json(capsys):
    from kfiltration.filtcx import FilteredComplex

    status, out, _ = run(capsys, "complex", "2(1)", "--dual", "--format", "json")
    c = FilteredComplex.from_json(json.loads(out))
    assert len(c) == 9 and int(c.alexander.max()) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "prop", "3.4", "-p", "2", "-n", "2", "--bogus"],
        ["alexander", "torus", "-p", "2"],
        ["alexander", "torus", "-p", "2", "-q", "4"],
        ["verify", "prop", "7.1"],
        ["verify", "lemma", "2.8", "-u", "1", "-v", "1", "-w", "1"],
        ["invariants", "(1"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_usage_error_in_json_mode_is_one_document(capsys):
    status, out, _ = run(capsys, "alexander", "torus", "-p", "2", "-q", "4", "--format", "json")
    assert status == 2 and json.loads(out)["exit"] == 2 and out.count("\n") == 1


def test_resource_limit_exit(capsys):
    status, _, _ = run(capsys, "verify", "prop", "3.4", "-p", "3", "-n", "2", "--max-generators", "20")
    assert status == 3
    status, _, _ = run(capsys, "invariants", "3(1, 1)", "--max-generators", "20")
    assert status == 3


def test_certificates(capsys, tmp_path):
    run(capsys, "verify", "lemma", "2.8", "-u", "2", "-v", "2", "-w", "1", "--certs", str(tmp_path))
    cert = json.loads((tmp_path / "lemma2.8_u2_v2_w1.json").read_text())
    assert cert["verdict"] == "confirmed" and "seconds" in cert


def test_determinism(capsys):
    argv = ["witness", "--pairs", "0,0;0,1;1,0", "--format", "json"]
    first, second = run(capsys, *argv)[1], run(capsys, *argv)[1]
    assert first == second


def test_verify_all_with_low_caps(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("KFILTRATION_MAX_GENERATORS", "40")
    status, out, _ = run(capsys, "verify", "all", "--certs", str(tmp_path), "--format", "json")
    doc = json.loads(out)
    assert doc["summary"]["refuted"] == 0 and doc["summary"]["resource-limited"] > 1
    assert status == 3
    assert len(list(tmp_path.glob("*.json"))) == len(doc["claims"])


def test_verify_all_catches_a_corrupted_closed_form(capsys, tmp_path, monkeypatch):
    real = alexander.closed_form_np1
    monkeypatch.setattr(alexander, "closed_form_np1", lambda p, n: real(p, n) + LaurentPoly({0: 1}))
    status, out, _ = run(capsys, "verify", "all", "--certs", str(tmp_path))
    assert status == 1
    assert out.splitlines()[0].startswith("refuted") and "closed-forms" in out.splitlines()[0]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kfiltration", "staircase", "torus", "-p", "2", "-q", "5"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "(1, 1)\n"
