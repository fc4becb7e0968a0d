"""Command line entry point.

Every subcommand reads JSON files, prints a JSON result on stdout, and exits
0 on a computed verdict (feasible or not), 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import SeqdecError
from . import jsonio
from .automatic import (
    check_hint_automatic,
    ebp_check,
    reduce_to_binary,
    solve_unary,
    verify_joint_witness,
)
from .circuits import SymbolicInstance, verify_hint_symbolic
from .explicit_solver import (
    R1_GIVEN,
    R2_GIVEN,
    encode_cnf,
    solve_explicit,
    solve_with_hint,
)
from .relations import Mode
from .service import DEFAULT_BUDGET_SECONDS, serve_forever
from .strategic import (
    T1_GIVEN,
    T2_GIVEN,
    StrategicWitness,
    solve_strategic,
    solve_strategic_hint,
    verify_witness_bounded,
)


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(payload):
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_solve_explicit(args):
    data = _load(args.instance)
    if args.mode:
        data["mode"] = args.mode
    inst = jsonio.explicit_instance_from_json(data)
    if args.emit_cnf:
        formula = encode_cnf(inst)
        with open(args.emit_cnf, "w", encoding="utf-8") as fh:
            fh.write(formula.to_dimacs())
        with open(args.emit_cnf + ".map.json", "w", encoding="utf-8") as fh:
            fh.write(formula.var_map_json())
    if args.hint_side:
        hint = jsonio.pairs_from_json(
            _load(args.hint_file),
            inst.input if args.hint_side == R1_GIVEN else inst.intermediate,
            inst.intermediate if args.hint_side == R1_GIVEN else inst.output,
            "hint",
        )
        res = solve_with_hint(inst, hint, args.hint_side)
        _emit(
            {
                "verdict": "feasible" if res.feasible else "infeasible",
                "witness": jsonio.witness_to_json(res.witness) if res.witness else None,
                "max_complement": [list(p) for p in res.complement.sorted_pairs()],
                "counterexample": None
                if res.report.holds
                else {"reason": res.report.reason, "value": res.report.counterexample},
            }
        )
        return
    res = solve_explicit(inst)
    _emit(
        {
            "verdict": "feasible" if res.feasible else "infeasible",
            "witness": jsonio.witness_to_json(res.witness) if res.witness else None,
            "stats": res.stats,
        }
    )


def _cmd_verify_symbolic(args):
    data = _load(args.instance)
    inst = SymbolicInstance(
        data["n_i"], data["n_o"], data["n_b"],
        jsonio.circuit_from_json(data["relation"]), Mode(data["mode"]),
    )
    hint = jsonio.circuit_from_json(_load(args.hint))
    report = verify_hint_symbolic(inst, hint, args.side)
    _emit(
        {
            "verdict": "holds" if report.holds else "violated",
            "failed": report.failed,
            "counterexample": report.assignment,
        }
    )


def _cmd_auto_hint(args):
    inst = jsonio.automatic_instance_from_json(_load(args.instance))
    hint = jsonio.automaton_from_json(_load(args.hint))
    res = check_hint_automatic(inst, hint, args.side)
    _emit(
        {
            "verdict": "feasible" if res.feasible else "infeasible",
            "witness": None
            if not res.feasible
            else {
                "r1": jsonio.automaton_to_json(res.r1),
                "r2": jsonio.automaton_to_json(res.r2),
            },
            "failed_condition": res.failed_condition,
            "counterexample": jsonio.word_to_json(res.counterexample),
        }
    )


def _cmd_unary(args):
    inst = jsonio.automatic_instance_from_json(_load(args.instance))
    res = solve_unary(inst)
    _emit(
        {
            "verdict": "feasible" if res.feasible else "infeasible",
            "witness": None
            if not res.feasible
            else {
                "r1": jsonio.automaton_to_json(res.r1),
                "r2": jsonio.automaton_to_json(res.r2),
            },
            "counterexample": None
            if res.feasible
            else {
                "input": jsonio.word_to_json(res.counterexample[0]),
                "output": jsonio.word_to_json(res.counterexample[1]),
            },
        }
    )


def _cmd_reduce_binary(args):
    inst = jsonio.automatic_instance_from_json(_load(args.instance))
    reduced = reduce_to_binary(inst)
    _emit(jsonio.automatic_instance_to_json(reduced))


def _cmd_ebp(args):
    dfa = jsonio.automaton_from_json(_load(args.dfa))
    report = ebp_check(dfa, args.max_n)
    if report.violation is None:
        _emit({"verdict": "ok", "ok_up_to": report.ok_up_to})
    else:
        n, count = report.violation
        _emit({"verdict": "violation", "n": n, "count": str(count)})


def _cmd_joint_verify(args):
    inst = jsonio.automatic_instance_from_json(_load(args.instance))
    joint = jsonio.automaton_from_json(_load(args.witness))
    report = verify_joint_witness(inst, joint)
    _emit(
        {
            "verdict": "holds" if report.holds else "violated",
            "failed_condition": report.failed_condition,
            "counterexample": jsonio.word_to_json(report.counterexample),
        }
    )


def _cmd_strategic(args):
    inst = jsonio.automatic_instance_from_json(_load(args.instance))
    if args.hint_t1 and args.hint_t2:
        raise SeqdecError("give at most one of --hint-t1 / --hint-t2")
    if args.hint_t1:
        res = solve_strategic_hint(
            inst, jsonio.transducer_from_json(_load(args.hint_t1)), T1_GIVEN
        )
    elif args.hint_t2:
        res = solve_strategic_hint(
            inst, jsonio.transducer_from_json(_load(args.hint_t2)), T2_GIVEN
        )
    else:
        res = solve_strategic(inst)
    payload = {
        "verdict": "feasible" if res.feasible else "infeasible",
        "witness": None
        if not res.feasible
        else {
            "t1": jsonio.transducer_to_json(res.witness.t1),
            "t2": jsonio.transducer_to_json(res.witness.t2),
        },
        "stats": res.stats,
    }
    if res.feasible and args.verify_n:
        check = verify_witness_bounded(inst, res.witness, args.verify_n)
        payload["verified_to"] = args.verify_n if check.ok else None
    _emit(payload)


def _cmd_serve(args):
    port = args.port
    if port is None:
        port = int(os.environ.get("SEQDEC_PORT", "8571"))
    serve_forever(port, args.cors_origin, args.budget)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqdec",
        description="Sequential decomposition of input/output relations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-explicit", help="solve an explicit instance")
    p.add_argument("instance")
    p.add_argument("--mode", choices=["td", "pd"])
    p.add_argument("--hint", nargs=2, metavar=("SIDE", "FILE"), default=None)
    p.add_argument("--emit-cnf", metavar="PATH")
    p.set_defaults(func=_cmd_solve_explicit)

    p = sub.add_parser("verify-symbolic", help="check a circuit hint")
    p.add_argument("instance")
    p.add_argument("--hint", required=True)
    p.add_argument("--side", choices=[R1_GIVEN, R2_GIVEN], required=True)
    p.set_defaults(func=_cmd_verify_symbolic)

    p = sub.add_parser("auto-hint", help="check an automatic-relation hint")
    p.add_argument("instance")
    p.add_argument("--hint", required=True)
    p.add_argument("--side", choices=[R1_GIVEN, R2_GIVEN], required=True)
    p.set_defaults(func=_cmd_auto_hint)

    p = sub.add_parser("unary", help="decide a unary-channel instance")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_unary)

    p = sub.add_parser("reduce-binary", help="rewrite onto the binary channel")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_reduce_binary)

    p = sub.add_parser("ebp", help="bounded per-length word-count check")
    p.add_argument("dfa")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=_cmd_ebp)

    p = sub.add_parser("joint-verify", help="check a three-track witness")
    p.add_argument("instance")
    p.add_argument("--witness", required=True)
    p.set_defaults(func=_cmd_joint_verify)

    p = sub.add_parser("strategic", help="synthesize strategy transducers")
    p.add_argument("instance")
    p.add_argument("--hint-t1")
    p.add_argument("--hint-t2")
    p.add_argument("--verify-n", type=int)
    p.set_defaults(func=_cmd_strategic)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--cors-origin")
    p.add_argument("--budget", type=float, default=DEFAULT_BUDGET_SECONDS)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve-explicit":
        if args.hint:
            args.hint_side, args.hint_file = args.hint
            if args.hint_side not in (R1_GIVEN, R2_GIVEN):
                parser.error('hint side must be "r1" or "r2"')
        else:
            args.hint_side = None
    try:
        args.func(args)
    except (SeqdecError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
