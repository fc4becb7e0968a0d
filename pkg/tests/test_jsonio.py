"""Round-trips and validation for every wire format."""

import pytest

from seqdec.errors import ValidationError
from seqdec import jsonio
from seqdec.automata import Dfa, TrackAlphabet, enumerate_bounded
from seqdec.circuits import CircuitBuilder, eval_circuit
from seqdec.relations import Domain, Mode
from seqdec.strategic import MooreTransducer, transduce

SIG = Domain("sigma", ("a", "b"))


def test_explicit_instance_roundtrip():
    data = {
        "input": ["i1", "i2"],
        "output": ["o1", "o2"],
        "intermediate": ["b"],
        "pairs": [["i1", "o1"], ["i2", "o2"]],
        "mode": "td",
    }
    inst = jsonio.explicit_instance_from_json(data)
    assert inst.mode is Mode.TD
    assert jsonio.explicit_instance_to_json(inst) == data


@pytest.mark.parametrize(
    "broken",
    [
        {},
        {"input": ["i"], "output": ["o"], "intermediate": ["b"], "pairs": [], "mode": "xx"},
        {"input": ["i"], "output": ["o"], "intermediate": ["b"], "pairs": [["i"]], "mode": "td"},
        {"input": "i", "output": ["o"], "intermediate": ["b"], "pairs": [], "mode": "td"},
        {"input": ["i"], "output": ["o"], "intermediate": ["b"], "pairs": [["i", "nope"]], "mode": "td"},
    ],
)
def test_explicit_instance_rejects_malformed(broken):
    with pytest.raises(ValidationError):
        jsonio.explicit_instance_from_json(broken)


def test_automaton_roundtrip():
    alpha = TrackAlphabet([("in", SIG), ("out", SIG)])
    dfa = Dfa(
        alpha, 1, 0, [(0, l, 0) for l in alpha.letters()], [0]
    )
    data = jsonio.automaton_to_json(dfa)
    back = jsonio.automaton_from_json(data)
    assert jsonio.automaton_to_json(back) == data
    assert [len(w) for w in enumerate_bounded(back, 2)] == [1, 4, 16]


def test_automaton_serialization_is_total():
    alpha = TrackAlphabet([("in", SIG)])
    partial = Dfa(alpha, 1, 0, [(0, ("a",), 0)], [0])
    data = jsonio.automaton_to_json(partial)
    assert data["states"] == 2  # includes the completion sink
    assert len(data["transitions"]) == 4


def test_automatic_instance_roundtrip():
    alpha = TrackAlphabet([("in", SIG), ("out", SIG)])
    dfa = Dfa(alpha, 1, 0, [(0, l, 0) for l in alpha.letters()], [0])
    data = {
        "sigma_i": ["a", "b"],
        "sigma_b": ["0"],
        "sigma_o": ["a", "b"],
        "relation": jsonio.automaton_to_json(dfa),
        "mode": "pd",
    }
    inst = jsonio.automatic_instance_from_json(data)
    assert jsonio.automatic_instance_to_json(inst) == data


def test_circuit_roundtrip():
    b = CircuitBuilder(2)
    circ = b.build(b.and_(b.input(0), b.not_(b.input(1))))
    data = jsonio.circuit_to_json(circ)
    back = jsonio.circuit_from_json(data)
    for bits in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        assert eval_circuit(back, bits) == eval_circuit(circ, bits)


def test_circuit_rejects_bad_gate():
    with pytest.raises(ValidationError):
        jsonio.circuit_from_json(
            {"inputs": 1, "gates": [{"op": "nand", "args": [0]}], "output": 0}
        )


def test_transducer_roundtrip():
    t = MooreTransducer.identity(SIG)
    data = jsonio.transducer_to_json(t)
    back = jsonio.transducer_from_json(data)
    for word in [(), ("a",), ("a", "b", "a")]:
        assert transduce(back, word) == transduce(t, word)


def test_transducer_rejects_partial_delta():
    with pytest.raises(ValidationError):
        jsonio.transducer_from_json(
            {
                "in": ["a", "b"],
                "out": ["a"],
                "states": 1,
                "initial": 0,
                "delta": [[0, "a", 0]],
                "outputs": ["a"],
            }
        )
