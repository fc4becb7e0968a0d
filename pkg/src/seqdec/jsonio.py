"""JSON (de)serialization for every file format the tools exchange.

Formats:
  explicit instance  {"input": [...], "output": [...], "intermediate": [...],
                      "pairs": [["i1","o1"], ...], "mode": "td"|"pd"}
  explicit witness   {"r1": [["i","b"], ...], "r2": [["b","o"], ...]}
  automaton          {"tracks": [["in", ["a","b"]], ["out", ["a","b"]]],
                      "states": n, "initial": 0, "accepting": [...],
                      "transitions": [[s, ["a","b"], t], ...]}
  circuit            {"inputs": n, "gates": [{"op": "and", "args": [0, 1]},
                      ...], "output": k}
  transducer         {"in": [...], "out": [...], "states": n, "initial": 0,
                      "delta": [[s, "a", t], ...], "outputs": ["o0", ...]}
  automatic instance {"sigma_i": [...], "sigma_b": [...], "sigma_o": [...],
                      "relation": <automaton>, "mode": "td"|"pd"}

Deserializers raise ValidationError on malformed structure so callers can
map failures to a uniform error channel.
"""

from __future__ import annotations

from typing import Optional

from .errors import ValidationError
from .automata import Dfa, Nfa, TrackAlphabet
from .automatic import AutomaticInstance
from .circuits import BoolCircuit, Gate
from .relations import (
    Domain,
    ExplicitInstance,
    ExplicitRelation,
    ExplicitWitness,
    Mode,
)
from .strategic import MooreTransducer


def _require(cond, message):
    if not cond:
        raise ValidationError(message)


def _symbols(value, what):
    _require(
        isinstance(value, list) and all(isinstance(s, str) for s in value),
        f"{what} must be a list of strings",
    )
    return tuple(value)


def _mode(value):
    _require(value in ("td", "pd"), 'mode must be "td" or "pd"')
    return Mode(value)


# -- explicit ---------------------------------------------------------------------


def explicit_instance_from_json(data) -> ExplicitInstance:
    _require(isinstance(data, dict), "instance must be an object")
    for key in ("input", "output", "intermediate", "pairs", "mode"):
        _require(key in data, f"instance is missing {key!r}")
    din = Domain("input", _symbols(data["input"], "input"))
    dout = Domain("output", _symbols(data["output"], "output"))
    dmid = Domain("intermediate", _symbols(data["intermediate"], "intermediate"))
    _require(isinstance(data["pairs"], list), "pairs must be a list")
    pairs = set()
    for item in data["pairs"]:
        _require(
            isinstance(item, list) and len(item) == 2,
            "each pair must be a two-element list",
        )
        pairs.add((item[0], item[1]))
    return ExplicitInstance(
        din, dout, dmid, ExplicitRelation.of(din, dout, pairs), _mode(data["mode"])
    )


def explicit_instance_to_json(inst: ExplicitInstance) -> dict:
    return {
        "input": list(inst.input.symbols),
        "output": list(inst.output.symbols),
        "intermediate": list(inst.intermediate.symbols),
        "pairs": [list(p) for p in inst.relation.sorted_pairs()],
        "mode": inst.mode.value,
    }


def pairs_from_json(data, src: Domain, dst: Domain, what: str) -> ExplicitRelation:
    _require(isinstance(data, list), f"{what} must be a list of pairs")
    pairs = set()
    for item in data:
        _require(
            isinstance(item, list) and len(item) == 2,
            f"each {what} entry must be a two-element list",
        )
        pairs.add((item[0], item[1]))
    return ExplicitRelation.of(src, dst, pairs)


def witness_to_json(w: ExplicitWitness) -> dict:
    return {
        "r1": [list(p) for p in w.r1.sorted_pairs()],
        "r2": [list(p) for p in w.r2.sorted_pairs()],
    }


def witness_from_json(data, inst: ExplicitInstance) -> ExplicitWitness:
    _require(isinstance(data, dict), "witness must be an object")
    _require("r1" in data and "r2" in data, 'witness needs "r1" and "r2"')
    return ExplicitWitness(
        pairs_from_json(data["r1"], inst.input, inst.intermediate, "r1"),
        pairs_from_json(data["r2"], inst.intermediate, inst.output, "r2"),
    )


# -- automata ---------------------------------------------------------------------


def automaton_from_json(data, *, deterministic=True):
    _require(isinstance(data, dict), "automaton must be an object")
    for key in ("tracks", "states", "initial", "accepting", "transitions"):
        _require(key in data, f"automaton is missing {key!r}")
    _require(
        isinstance(data["tracks"], list) and data["tracks"],
        "tracks must be a non-empty list",
    )
    tracks = []
    for item in data["tracks"]:
        _require(
            isinstance(item, list) and len(item) == 2,
            "each track must be [name, symbols]",
        )
        name, symbols = item
        tracks.append((name, Domain(name, _symbols(symbols, f"track {name}"))))
    alphabet = TrackAlphabet(tracks)
    transitions = []
    _require(isinstance(data["transitions"], list), "transitions must be a list")
    for item in data["transitions"]:
        _require(
            isinstance(item, list) and len(item) == 3,
            "each transition must be [state, letter, state]",
        )
        s, letter, t = item
        _require(
            isinstance(letter, list) and len(letter) == len(tracks),
            "letters must list one symbol per track",
        )
        transitions.append((s, tuple(letter), t))
    cls = Dfa if deterministic else Nfa
    try:
        return cls(
            alphabet, data["states"], data["initial"], transitions, data["accepting"]
        )
    except (TypeError, KeyError) as exc:
        raise ValidationError(f"malformed automaton: {exc}") from exc


def automaton_to_json(a: Nfa) -> dict:
    return {
        "tracks": [[name, list(dom.symbols)] for name, dom in a.alphabet.tracks],
        "states": a.state_count,
        "initial": a.initial,
        "accepting": sorted(a.accepting),
        "transitions": [
            [s, list(l), t]
            for s, l, t in sorted(
                a.transitions, key=lambda e: (e[0], a.alphabet.rank(e[1]), e[2])
            )
        ],
    }


def word_to_json(word) -> Optional[list]:
    if word is None:
        return None
    return [list(letter) for letter in word]


# -- automatic instances -------------------------------------------------------------


def automatic_instance_from_json(data) -> AutomaticInstance:
    _require(isinstance(data, dict), "instance must be an object")
    for key in ("sigma_i", "sigma_b", "sigma_o", "relation", "mode"):
        _require(key in data, f"instance is missing {key!r}")
    return AutomaticInstance(
        Domain("sigma_i", _symbols(data["sigma_i"], "sigma_i")),
        Domain("sigma_b", _symbols(data["sigma_b"], "sigma_b")),
        Domain("sigma_o", _symbols(data["sigma_o"], "sigma_o")),
        automaton_from_json(data["relation"]),
        _mode(data["mode"]),
    )


def automatic_instance_to_json(inst: AutomaticInstance) -> dict:
    return {
        "sigma_i": list(inst.sigma_i.symbols),
        "sigma_b": list(inst.sigma_b.symbols),
        "sigma_o": list(inst.sigma_o.symbols),
        "relation": automaton_to_json(inst.relation),
        "mode": inst.mode.value,
    }


# -- circuits --------------------------------------------------------------------------


def circuit_from_json(data) -> BoolCircuit:
    _require(isinstance(data, dict), "circuit must be an object")
    for key in ("inputs", "gates", "output"):
        _require(key in data, f"circuit is missing {key!r}")
    _require(isinstance(data["gates"], list), "gates must be a list")
    gates = []
    for item in data["gates"]:
        _require(
            isinstance(item, dict) and "op" in item,
            'each gate must be an object with an "op"',
        )
        args = item.get("args", [])
        _require(
            isinstance(args, list) and all(isinstance(a, int) for a in args),
            "gate args must be a list of integers",
        )
        gates.append(Gate(item["op"], tuple(args)))
    try:
        return BoolCircuit(data["inputs"], tuple(gates), data["output"])
    except TypeError as exc:
        raise ValidationError(f"malformed circuit: {exc}") from exc


def circuit_to_json(c: BoolCircuit) -> dict:
    return {
        "inputs": c.input_arity,
        "gates": [{"op": g.op, "args": list(g.args)} for g in c.gates],
        "output": c.output,
    }


# -- transducers --------------------------------------------------------------------------


def transducer_from_json(data) -> MooreTransducer:
    _require(isinstance(data, dict), "transducer must be an object")
    for key in ("in", "out", "states", "initial", "delta", "outputs"):
        _require(key in data, f"transducer is missing {key!r}")
    din = Domain("in", _symbols(data["in"], "in"))
    dout = Domain("out", _symbols(data["out"], "out"))
    _require(isinstance(data["states"], int) and data["states"] > 0, "bad state count")
    n = data["states"]
    rows = [[None] * len(din) for _ in range(n)]
    _require(isinstance(data["delta"], list), "delta must be a list")
    for item in data["delta"]:
        _require(
            isinstance(item, list) and len(item) == 3,
            "each delta entry must be [state, letter, state]",
        )
        s, letter, t = item
        _require(
            isinstance(s, int) and 0 <= s < n and isinstance(t, int) and 0 <= t < n,
            "delta state out of range",
        )
        k = din.index(letter)
        _require(rows[s][k] is None, f"duplicate delta entry for ({s}, {letter!r})")
        rows[s][k] = t
    for s, row in enumerate(rows):
        _require(None not in row, f"delta is not total at state {s}")
    outputs = _symbols(data["outputs"], "outputs")
    return MooreTransducer(
        din, dout, n, data["initial"], tuple(tuple(r) for r in rows), outputs
    )


def transducer_to_json(t: MooreTransducer) -> dict:
    return {
        "in": list(t.input_domain.symbols),
        "out": list(t.output_domain.symbols),
        "states": t.state_count,
        "initial": t.initial,
        "delta": [
            [s, letter, t.delta[s][k]]
            for s in range(t.state_count)
            for k, letter in enumerate(t.input_domain.symbols)
        ],
        "outputs": list(t.outputs),
    }
