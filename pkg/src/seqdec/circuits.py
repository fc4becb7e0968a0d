"""Boolean-circuit representation of relations over bit-vector domains.

A circuit decides membership of an (input bits, output bits) pair.  Hints
are verified by direct evaluation of the quantified conditions, with the
maximal complement expressed as a formula over the given circuits rather
than materialized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .errors import CapExceededError, ValidationError
from .relations import Domain, ExplicitInstance, ExplicitRelation, Mode

_OPS = {"const", "input", "not", "and", "or", "xor"}


@dataclass(frozen=True)
class Gate:
    op: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class BoolCircuit:
    """A topologically ordered gate list with a single output node."""

    input_arity: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if self.input_arity < 0:
            raise ValidationError("negative input arity")
        if not 0 <= self.output < len(self.gates):
            raise ValidationError("output gate out of range")
        for k, g in enumerate(self.gates):
            if g.op not in _OPS:
                raise ValidationError(f"unknown gate op {g.op!r}")
            if g.op == "const":
                if len(g.args) != 1 or g.args[0] not in (0, 1):
                    raise ValidationError("const gate takes a single 0/1 argument")
            elif g.op == "input":
                if len(g.args) != 1 or not 0 <= g.args[0] < self.input_arity:
                    raise ValidationError(f"input gate {k} out of arity range")
            else:
                if g.op == "not" and len(g.args) != 1:
                    raise ValidationError("not gate takes one argument")
                if g.op == "xor" and len(g.args) != 2:
                    raise ValidationError("xor gate takes two arguments")
                if g.op in ("and", "or") and len(g.args) < 1:
                    raise ValidationError(f"{g.op} gate needs arguments")
                for a in g.args:
                    if not 0 <= a < k:
                        raise ValidationError(
                            f"gate {k} references {a}, breaking topological order"
                        )


class CircuitBuilder:
    """Incremental construction helper returning gate indices."""

    def __init__(self, input_arity: int):
        self.input_arity = input_arity
        self._gates: list[Gate] = []

    def _add(self, op, *args):
        self._gates.append(Gate(op, tuple(args)))
        return len(self._gates) - 1

    def const(self, value):
        return self._add("const", 1 if value else 0)

    def input(self, index):
        return self._add("input", index)

    def not_(self, a):
        return self._add("not", a)

    def and_(self, *args):
        return self._add("and", *args)

    def or_(self, *args):
        return self._add("or", *args)

    def xor(self, a, b):
        return self._add("xor", a, b)

    def build(self, output: int) -> BoolCircuit:
        return BoolCircuit(self.input_arity, tuple(self._gates), output)


def eval_circuit(c: BoolCircuit, bits) -> int:
    """Gate-by-gate evaluation of one input vector."""
    bits = tuple(int(b) for b in bits)
    if len(bits) != c.input_arity:
        raise ValidationError(
            f"expected {c.input_arity} input bits, got {len(bits)}"
        )
    vals = []
    for g in c.gates:
        if g.op == "const":
            vals.append(g.args[0])
        elif g.op == "input":
            vals.append(bits[g.args[0]])
        elif g.op == "not":
            vals.append(1 - vals[g.args[0]])
        elif g.op == "and":
            vals.append(int(all(vals[a] for a in g.args)))
        elif g.op == "or":
            vals.append(int(any(vals[a] for a in g.args)))
        else:  # xor
            vals.append(vals[g.args[0]] ^ vals[g.args[1]])
    return vals[c.output]


@dataclass(frozen=True)
class SymbolicInstance:
    """Bit-widths for the three domains plus the membership circuit."""

    n_i: int
    n_o: int
    n_b: int
    relation: BoolCircuit
    mode: Mode

    def __post_init__(self):
        if min(self.n_i, self.n_o, self.n_b) <= 0:
            raise ValidationError("bit widths must be positive")
        if self.relation.input_arity != self.n_i + self.n_o:
            raise ValidationError(
                f"relation circuit arity {self.relation.input_arity} != "
                f"n_i + n_o = {self.n_i + self.n_o}"
            )
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(self.mode))


def _bitstrings(n: int):
    return ("".join(map(str, bits)) for bits in itertools.product((0, 1), repeat=n))


def bit_domain(name: str, n: int) -> Domain:
    return Domain(name, tuple(_bitstrings(n)))


def expand_to_explicit(
    inst: SymbolicInstance, max_bits: int = 20, max_b_bits: int = 6
) -> ExplicitInstance:
    """Tabulate the circuit over all bit vectors; desk scale only."""
    if inst.n_i + inst.n_o > max_bits:
        raise CapExceededError(
            f"expansion refused: n_i + n_o = {inst.n_i + inst.n_o} > {max_bits}"
        )
    if inst.n_b > max_b_bits:
        raise CapExceededError(f"expansion refused: n_b = {inst.n_b} > {max_b_bits}")
    din = bit_domain("input", inst.n_i)
    dout = bit_domain("output", inst.n_o)
    dmid = bit_domain("mid", inst.n_b)
    pairs = {
        (u, v)
        for u in din.symbols
        for v in dout.symbols
        if eval_circuit(inst.relation, tuple(map(int, u + v)))
    }
    return ExplicitInstance(
        din, dout, dmid, ExplicitRelation.of(din, dout, pairs), inst.mode
    )


def expand_hint(hint: BoolCircuit, src: Domain, dst: Domain) -> ExplicitRelation:
    """Tabulate a hint circuit over explicit bit-string domains."""
    pairs = {
        (u, v)
        for u in src.symbols
        for v in dst.symbols
        if eval_circuit(hint, tuple(map(int, u + v)))
    }
    return ExplicitRelation.of(src, dst, pairs)


R1_GIVEN = "r1"
R2_GIVEN = "r2"


@dataclass(frozen=True)
class SymbolicReport:
    """Outcome of the quantified-condition check.

    ``failed`` names the condition that fell over; ``assignment`` carries the
    outermost universal assignment that falsified it (bit strings per role).
    """

    holds: bool
    failed: Optional[str] = None
    assignment: Optional[dict] = None

    def __bool__(self):
        return self.holds


def verify_hint_symbolic(
    inst: SymbolicInstance,
    hint: BoolCircuit,
    side: str,
    max_quantified_bits: int = 24,
) -> SymbolicReport:
    """Evaluate the decomposition conditions by quantifier enumeration.

    The complementary relation never gets materialized: on the r1 side the
    candidate pairs (b, o) are those where every input mapped to b relates
    to o; on the r2 side the candidate pairs (i, b) need b non-dead and all
    its successors related from i.  Enumeration is innermost-first with
    short-circuiting and ascending bit vectors, so the reported assignment
    is the lexicographically first falsifier.
    """
    n_i, n_o, n_b = inst.n_i, inst.n_o, inst.n_b
    if n_i + n_o + n_b > max_quantified_bits:
        raise CapExceededError(
            f"quantified evaluation refused: {n_i + n_o + n_b} bits > "
            f"{max_quantified_bits}"
        )
    if side == R1_GIVEN:
        expected_arity = n_i + n_b
    elif side == R2_GIVEN:
        expected_arity = n_b + n_o
    else:
        raise ValidationError(f"side must be {R1_GIVEN!r} or {R2_GIVEN!r}")
    if hint.input_arity != expected_arity:
        raise ValidationError(
            f"hint arity {hint.input_arity} != expected {expected_arity}"
        )

    vi = list(itertools.product((0, 1), repeat=n_i))
    vo = list(itertools.product((0, 1), repeat=n_o))
    vb = list(itertools.product((0, 1), repeat=n_b))

    def rel(i, o):
        return eval_circuit(inst.relation, i + o)

    if side == R1_GIVEN:
        def first(i, b):
            return eval_circuit(hint, i + b)

        def second(b, o):
            return all(not first(i, b) or rel(i, o) for i in vi)
    else:
        def second(b, o):
            return eval_circuit(hint, b + o)

        def first(i, b):
            return any(second(b, o) for o in vo) and all(
                not second(b, o) or rel(i, o) for o in vo
            )

    def fmt(bits):
        return "".join(map(str, bits))

    # image condition: every bridged (i, b) leaves b with a successor
    for b in vb:
        for i in vi:
            if first(i, b) and not any(second(b, o) for o in vo):
                return SymbolicReport(False, "image", {"b": fmt(b), "i": fmt(i)})

    def composed(i, o):
        return any(first(i, b) and second(b, o) for b in vb)

    if inst.mode is Mode.TD:
        for i in vi:
            for o in vo:
                if composed(i, o) != bool(rel(i, o)):
                    return SymbolicReport(
                        False, "composition-equality", {"i": fmt(i), "o": fmt(o)}
                    )
        return SymbolicReport(True)

    for i in vi:
        if any(composed(i, o) for o in vo) != any(rel(i, o) for o in vo):
            return SymbolicReport(False, "domain-equality", {"i": fmt(i)})
    for i in vi:
        for o in vo:
            if composed(i, o) and not rel(i, o):
                return SymbolicReport(
                    False, "containment", {"i": fmt(i), "o": fmt(o)}
                )
    return SymbolicReport(True)
