#!/usr/bin/env python3
"""Generate the frozen hint-exploration parity corpus.

Writes tests/fixtures/parity_corpus.json: ten (request, expected verdict)
cases for the hint endpoints.  Expected verdicts are computed through the
service handler at generation time and then frozen; the acceptance suite and
the browser UI tests both replay the file.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from seqdec.service import handle  # noqa: E402


def explicit_case(name, instance, hint, side):
    return {
        "name": name,
        "endpoint": "/api/explicit/hint",
        "request": {"instance": instance, "hint": hint, "side": side},
    }


def automatic_case(name, instance, hint, side):
    return {
        "name": name,
        "endpoint": "/api/automatic/hint",
        "request": {"instance": instance, "hint": hint, "side": side},
    }


SMALL_IDENTITY = {
    "input": ["i1", "i2"],
    "output": ["o1", "o2"],
    "intermediate": ["b"],
    "pairs": [["i1", "o1"], ["i2", "o2"]],
    "mode": "td",
}

FULL_2X2 = {
    "input": ["i1", "i2"],
    "output": ["o1", "o2"],
    "intermediate": ["b"],
    "pairs": [["i1", "o1"], ["i1", "o2"], ["i2", "o1"], ["i2", "o2"]],
    "mode": "td",
}

COLLAPSE = {
    "input": ["i1", "i2"],
    "output": ["o1", "o2"],
    "intermediate": ["b"],
    "pairs": [["i1", "o1"], ["i2", "o1"]],
    "mode": "td",
}

EMPTY = {
    "input": ["i1", "i2"],
    "output": ["o1", "o2"],
    "intermediate": ["b"],
    "pairs": [],
    "mode": "pd",
}

WIDE = {
    "input": ["i1", "i2", "i3"],
    "output": ["o1", "o2"],
    "intermediate": ["b1", "b2"],
    "pairs": [["i1", "o1"], ["i2", "o2"], ["i3", "o1"]],
    "mode": "pd",
}

IDENTITY_DFA = {
    "tracks": [["in", ["a", "b"]], ["out", ["a", "b"]]],
    "states": 2,
    "initial": 0,
    "accepting": [0],
    "transitions": [
        [0, ["a", "a"], 0],
        [0, ["a", "b"], 1],
        [0, ["b", "a"], 1],
        [0, ["b", "b"], 0],
        [1, ["a", "a"], 1],
        [1, ["a", "b"], 1],
        [1, ["b", "a"], 1],
        [1, ["b", "b"], 1],
    ],
}

COPY_HINT_DFA = {
    "tracks": [["in", ["a", "b"]], ["mid", ["a", "b"]]],
    "states": 2,
    "initial": 0,
    "accepting": [0],
    "transitions": [
        [0, ["a", "a"], 0],
        [0, ["a", "b"], 1],
        [0, ["b", "a"], 1],
        [0, ["b", "b"], 0],
        [1, ["a", "a"], 1],
        [1, ["a", "b"], 1],
        [1, ["b", "a"], 1],
        [1, ["b", "b"], 1],
    ],
}

CONSTANT_HINT_DFA = {
    "tracks": [["in", ["a", "b"]], ["mid", ["0"]]],
    "states": 1,
    "initial": 0,
    "accepting": [0],
    "transitions": [[0, ["a", "0"], 0], [0, ["b", "0"], 0]],
}

AUTOMATIC_IDENTITY = {
    "sigma_i": ["a", "b"],
    "sigma_b": ["a", "b"],
    "sigma_o": ["a", "b"],
    "relation": IDENTITY_DFA,
    "mode": "td",
}

AUTOMATIC_IDENTITY_UNARY = {
    "sigma_i": ["a", "b"],
    "sigma_b": ["0"],
    "sigma_o": ["a", "b"],
    "relation": IDENTITY_DFA,
    "mode": "td",
}


def build():
    cases = [
        explicit_case(
            "small-identity-collapsing-hint", SMALL_IDENTITY,
            [["i1", "b"], ["i2", "b"]], "r1",
        ),
        explicit_case(
            "full-2x2-full-hint", FULL_2X2, [["i1", "b"], ["i2", "b"]], "r1"
        ),
        explicit_case("collapse-feasible", COLLAPSE, [["i1", "b"], ["i2", "b"]], "r1"),
        explicit_case("empty-relation-empty-hint", EMPTY, [], "r1"),
        explicit_case("small-identity-r2-hint", SMALL_IDENTITY, [["b", "o1"]], "r2"),
        explicit_case("full-2x2-r2-hint", FULL_2X2, [["b", "o1"], ["b", "o2"]], "r2"),
        explicit_case(
            "wide-pd-r1-hint", WIDE,
            [["i1", "b1"], ["i2", "b2"], ["i3", "b1"]], "r1",
        ),
        explicit_case("wide-pd-partial-hint", WIDE, [["i1", "b1"]], "r1"),
        automatic_case(
            "automatic-identity-copy-hint", AUTOMATIC_IDENTITY, COPY_HINT_DFA, "r1"
        ),
        automatic_case(
            "automatic-identity-unary-hint", AUTOMATIC_IDENTITY_UNARY,
            CONSTANT_HINT_DFA, "r1",
        ),
    ]
    for case in cases:
        status, body = handle(
            "POST", case["endpoint"], json.dumps(case["request"]).encode()
        )
        assert status == 200, (case["name"], status, body)
        case["expected_verdict"] = body["verdict"]
        case["expected_response"] = body
    return cases


def main():
    out = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    cases = build()
    target = out / "parity_corpus.json"
    target.write_text(json.dumps(cases, indent=2, sort_keys=True) + "\n")
    verdicts = [c["expected_verdict"] for c in cases]
    print(f"wrote {target} ({len(cases)} cases: {verdicts})")


if __name__ == "__main__":
    main()
