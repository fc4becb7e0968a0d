"""Command line interface smoke tests (direct main() invocation)."""

import json

import pytest

from seqdec import jsonio
from seqdec.automata import Dfa, TrackAlphabet
from seqdec.cli import main
from seqdec.relations import Domain

SMALL_IDENTITY = {
    "input": ["i1", "i2"],
    "output": ["o1", "o2"],
    "intermediate": ["b"],
    "pairs": [["i1", "o1"], ["i2", "o2"]],
    "mode": "td",
}


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def identity_relation_json():
    sig = Domain("s", ("a", "b"))
    alpha = TrackAlphabet([("in", sig), ("out", sig)])
    eq = [l for l in alpha.letters() if l[0] == l[1]]
    ne = [l for l in alpha.letters() if l[0] != l[1]]
    dfa = Dfa(
        alpha, 2, 0,
        [(0, l, 0) for l in eq] + [(0, l, 1) for l in ne]
        + [(1, l, 1) for l in alpha.letters()],
        [0],
    )
    return jsonio.automaton_to_json(dfa)


def automatic_instance_json(sigma_b, mode="td"):
    return {
        "sigma_i": ["a", "b"],
        "sigma_b": sigma_b,
        "sigma_o": ["a", "b"],
        "relation": identity_relation_json(),
        "mode": mode,
    }


def test_solve_explicit(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", SMALL_IDENTITY)
    code, body = run(capsys, "solve-explicit", inst)
    assert code == 0
    assert body["verdict"] == "infeasible"


def test_solve_explicit_emit_cnf(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", SMALL_IDENTITY)
    cnf_path = tmp_path / "out.cnf"
    code, _ = run(capsys, "solve-explicit", inst, "--emit-cnf", str(cnf_path))
    assert code == 0
    assert cnf_path.read_text().startswith("p cnf 7 11")
    sidecar = json.loads((tmp_path / "out.cnf.map.json").read_text())
    assert set(sidecar) == {"x", "y", "d", "z"}


def test_solve_explicit_with_hint(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", SMALL_IDENTITY)
    hint = write(tmp_path, "hint.json", [["i1", "b"], ["i2", "b"]])
    code, body = run(capsys, "solve-explicit", inst, "--hint", "r1", hint)
    assert code == 0
    assert body["verdict"] == "infeasible"
    assert body["max_complement"] == []


def test_unary_command(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", automatic_instance_json(["0"]))
    code, body = run(capsys, "unary", inst)
    assert code == 0
    assert body["verdict"] == "infeasible"


def test_auto_hint_command(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", automatic_instance_json(["a", "b"]))
    hint = write(tmp_path, "hint.json", identity_relation_json())
    code, body = run(capsys, "auto-hint", inst, "--hint", hint, "--side", "r1")
    assert code == 0
    assert body["verdict"] == "feasible"


def test_reduce_binary_command(tmp_path, capsys):
    inst = write(
        tmp_path, "inst.json", automatic_instance_json(["p", "q", "r", "s"])
    )
    code, body = run(capsys, "reduce-binary", inst)
    assert code == 0
    assert body["sigma_b"] == ["0", "1"]


def test_ebp_command(tmp_path, capsys):
    dfa = write(tmp_path, "dfa.json", identity_relation_json())
    code, body = run(capsys, "ebp", dfa, "--max-n", "6")
    assert code == 0
    assert body["verdict"] == "ok"  # identity has 2^n words of length n... over 4 letters
    # identity over a 2-letter domain accepts exactly 2^n words of length n
    assert body["ok_up_to"] == 6


def test_strategic_command(tmp_path, capsys):
    inst = write(tmp_path, "inst.json", automatic_instance_json(["a", "b"], "pd"))
    code, body = run(capsys, "strategic", inst, "--verify-n", "4")
    assert code == 0
    assert body["verdict"] == "feasible"
    assert body["verified_to"] == 4


def test_joint_verify_command(tmp_path, capsys):
    sig = Domain("s", ("a", "b"))
    alpha = TrackAlphabet([("in", sig), ("mid", sig), ("out", sig)])
    eq = [l for l in alpha.letters() if l[0] == l[1] == l[2]]
    ne = [l for l in alpha.letters() if not (l[0] == l[1] == l[2])]
    joint = Dfa(
        alpha, 2, 0,
        [(0, l, 0) for l in eq] + [(0, l, 1) for l in ne]
        + [(1, l, 1) for l in alpha.letters()],
        [0],
    )
    inst = write(tmp_path, "inst.json", automatic_instance_json(["a", "b"]))
    witness = write(tmp_path, "joint.json", jsonio.automaton_to_json(joint))
    code, body = run(capsys, "joint-verify", inst, "--witness", witness)
    assert code == 0
    assert body["verdict"] == "holds"


def test_verify_symbolic_command(tmp_path, capsys):
    equality = {
        "inputs": 2,
        "gates": [
            {"op": "input", "args": [0]},
            {"op": "input", "args": [1]},
            {"op": "xor", "args": [0, 1]},
            {"op": "not", "args": [2]},
        ],
        "output": 3,
    }
    inst = write(
        tmp_path, "inst.json",
        {"n_i": 1, "n_o": 1, "n_b": 1, "relation": equality, "mode": "td"},
    )
    hint = write(tmp_path, "hint.json", equality)
    code, body = run(capsys, "verify-symbolic", inst, "--hint", hint, "--side", "r1")
    assert code == 0
    assert body["verdict"] == "holds"


def test_missing_file_exits_2(tmp_path, capsys):
    code = main(["solve-explicit", str(tmp_path / "absent.json")])
    assert code == 2


def test_invalid_instance_exits_2(tmp_path, capsys):
    inst = write(tmp_path, "bad.json", {"input": []})
    code = main(["solve-explicit", inst])
    assert code == 2
