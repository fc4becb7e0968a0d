"""Explicit finite relations and the decomposition condition checkers.

A decomposition instance asks whether a relation R between an input and an
output domain can be written as the composition of two relations routed
through a (typically smaller) intermediate domain.  Two flavours are
supported: total mode requires the composition to equal R exactly, partial
mode allows dropping output associations as long as every input stays
resolvable and nothing new is added.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    CapExceededError,
    DomainMismatchError,
    NoTrivialDecompositionError,
    ValidationError,
)


@dataclass(frozen=True)
class Domain:
    """A named, ordered finite set of symbol labels.

    Symbol order is fixed at construction and drives every deterministic
    tie-break (counterexample selection, witness enumeration, serialization).
    """

    name: str
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(set(self.symbols)) != len(self.symbols):
            raise ValidationError(f"domain {self.name!r} has duplicate symbols")

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValidationError(
                f"symbol {symbol!r} is not in domain {self.name!r}"
            ) from None

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols


class Mode(str, Enum):
    """Which decomposition condition an instance asks for."""

    TD = "td"
    PD = "pd"


@dataclass(frozen=True)
class ExplicitRelation:
    """A finite set of (source symbol, target symbol) pairs."""

    source: Domain
    target: Domain
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))
        for a, b in self.pairs:
            if a not in self.source:
                raise ValidationError(
                    f"pair component {a!r} is not in domain {self.source.name!r}"
                )
            if b not in self.target:
                raise ValidationError(
                    f"pair component {b!r} is not in domain {self.target.name!r}"
                )

    @classmethod
    def of(cls, source: Domain, target: Domain, pairs: Iterable[tuple[str, str]]):
        return cls(source, target, frozenset(pairs))

    def dom(self) -> set[str]:
        return {a for a, _ in self.pairs}

    def img(self) -> set[str]:
        return {b for _, b in self.pairs}

    def img_of(self, a: str) -> set[str]:
        return {b for x, b in self.pairs if x == a}

    def sorted_pairs(self) -> list[tuple[str, str]]:
        """Pairs ordered by (source index, target index)."""
        return sorted(
            self.pairs, key=lambda p: (self.source.index(p[0]), self.target.index(p[1]))
        )

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def compose(r1: ExplicitRelation, r2: ExplicitRelation) -> ExplicitRelation:
    """Relational composition: all (a, c) with some b linking them."""
    if r1.target != r2.source:
        raise DomainMismatchError(
            f"cannot compose: {r1.target.name!r} (symbols {list(r1.target)}) != "
            f"{r2.source.name!r} (symbols {list(r2.source)})"
        )
    by_b: dict[str, set[str]] = {}
    for b, c in r2.pairs:
        by_b.setdefault(b, set()).add(c)
    out = set()
    for a, b in r1.pairs:
        for c in by_b.get(b, ()):
            out.add((a, c))
    return ExplicitRelation(r1.source, r2.target, frozenset(out))


@dataclass(frozen=True)
class ExplicitInstance:
    """A decomposition question over explicitly tabulated domains."""

    input: Domain
    output: Domain
    intermediate: Domain
    relation: ExplicitRelation
    mode: Mode

    def __post_init__(self):
        if len(self.input) == 0 or len(self.output) == 0:
            raise ValidationError("input and output domains must be non-empty")
        if len(self.intermediate) == 0:
            raise ValidationError("intermediate domain must have size >= 1")
        if self.relation.source != self.input or self.relation.target != self.output:
            raise DomainMismatchError(
                "relation domains do not match the instance's input/output domains"
            )
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(self.mode))


@dataclass(frozen=True)
class ExplicitWitness:
    """A candidate decomposition (r1 through the intermediate, then r2)."""

    r1: ExplicitRelation
    r2: ExplicitRelation


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of checking a witness: holds, or violated with evidence.

    ``counterexample`` is the lexicographically smallest offending pair or
    symbol, ordered by domain symbol order.
    """

    holds: bool
    reason: Optional[str] = None
    counterexample: object = None

    def __bool__(self) -> bool:
        return self.holds


def _check_witness_domains(inst: ExplicitInstance, w: ExplicitWitness) -> None:
    if w.r1.source != inst.input or w.r1.target != inst.intermediate:
        raise DomainMismatchError("witness r1 domains do not match the instance")
    if w.r2.source != inst.intermediate or w.r2.target != inst.output:
        raise DomainMismatchError("witness r2 domains do not match the instance")


def check_conditions(inst: ExplicitInstance, w: ExplicitWitness) -> ConditionReport:
    """Check the total or partial decomposition condition for a witness.

    Total mode: Img(r1) is covered by Dom(r2) and r1∘r2 equals the relation.
    Partial mode: the image condition, plus r1∘r2 stays inside the relation
    while covering the relation's whole domain.
    """
    _check_witness_domains(inst, w)
    uncovered = sorted(w.r1.img() - w.r2.dom(), key=inst.intermediate.index)
    if uncovered:
        return ConditionReport(False, "image-not-covered", uncovered[0])

    comp = compose(w.r1, w.r2)
    rel = inst.relation
    key = lambda p: (inst.input.index(p[0]), inst.output.index(p[1]))

    extra = sorted(comp.pairs - rel.pairs, key=key)
    if extra:
        return ConditionReport(False, "extra-pair", extra[0])
    if inst.mode is Mode.TD:
        missing = sorted(rel.pairs - comp.pairs, key=key)
        if missing:
            return ConditionReport(False, "missing-pair", missing[0])
        return ConditionReport(True)

    missing_inputs = sorted(rel.dom() - comp.dom(), key=inst.input.index)
    if missing_inputs:
        return ConditionReport(False, "missing-input", missing_inputs[0])
    extra_inputs = sorted(comp.dom() - rel.dom(), key=inst.input.index)
    if extra_inputs:
        return ConditionReport(False, "extra-input", extra_inputs[0])
    return ConditionReport(True)


def trivial_decompose(inst: ExplicitInstance) -> ExplicitWitness:
    """Injection-based decomposition for a large-enough intermediate domain.

    When the intermediate domain is at least as large as the output domain,
    route each output symbol through its own intermediate symbol; mirrored
    when it is at least as large as the input domain instead.  The result
    always satisfies the total condition.
    """
    ndom_i, ndom_o, ndom_b = len(inst.input), len(inst.output), len(inst.intermediate)
    rel = inst.relation
    if ndom_b >= ndom_o:
        g = {o: inst.intermediate.symbols[k] for k, o in enumerate(inst.output.symbols)}
        r2 = ExplicitRelation.of(
            inst.intermediate, inst.output, ((g[o], o) for o in inst.output)
        )
        r1 = ExplicitRelation.of(
            inst.input, inst.intermediate, ((i, g[o]) for i, o in rel.pairs)
        )
        return ExplicitWitness(r1, r2)
    if ndom_b >= ndom_i:
        g = {i: inst.intermediate.symbols[k] for k, i in enumerate(inst.input.symbols)}
        r1 = ExplicitRelation.of(
            inst.input, inst.intermediate, ((i, g[i]) for i in rel.dom())
        )
        r2 = ExplicitRelation.of(
            inst.intermediate, inst.output, ((g[i], o) for i, o in rel.pairs)
        )
        return ExplicitWitness(r1, r2)
    raise NoTrivialDecompositionError("no trivial decomposition")


@dataclass(frozen=True)
class SolveResult:
    """Verdict of an exact solver, with a verified witness when feasible."""

    feasible: bool
    witness: Optional[ExplicitWitness] = None
    stats: dict = field(default_factory=dict)


def _relation_rows(rel: ExplicitRelation, inst: ExplicitInstance) -> list[int]:
    """Relation as one output-bitmask per input symbol."""
    rows = [0] * len(inst.input)
    for i, o in rel.pairs:
        rows[inst.input.index(i)] |= 1 << inst.output.index(o)
    return rows


def brute_force_solve(inst: ExplicitInstance, cap: int = 20) -> SolveResult:
    """Exhaustive oracle: enumerate every candidate r1 and derive a maximal r2.

    Only r1 candidates need enumeration: for a fixed r1 the largest relation
    that cannot add forbidden pairs is forced, and it succeeds whenever any
    complement does.  Candidates are visited in ascending bitmask order
    (bit i*|B|+b set means (input_i, mid_b) is in r1), so the first feasible
    witness is reproducible.
    """
    n_i, n_b, n_o = len(inst.input), len(inst.intermediate), len(inst.output)
    if n_i * n_b > cap:
        raise CapExceededError(
            f"brute force refused: |input|*|intermediate| = {n_i * n_b} > cap {cap}",
            {"cells": n_i * n_b, "cap": cap},
        )
    r_rows = _relation_rows(inst.relation, inst)
    full_o = (1 << n_o) - 1
    want_td = inst.mode is Mode.TD
    tried = 0
    for mask in range(1 << (n_i * n_b)):
        tried += 1
        r1_rows = [(mask >> (i * n_b)) & ((1 << n_b) - 1) for i in range(n_i)]
        # Maximal r2: for each mid symbol, intersect the rows of the inputs
        # mapped onto it.  Composition is then automatically inside R.
        r2_rows = [full_o] * n_b
        used = 0
        for i in range(n_i):
            row = r1_rows[i]
            used |= row
            b = 0
            while row:
                if row & 1:
                    r2_rows[b] &= r_rows[i]
                row >>= 1
                b += 1
        if any(used >> b & 1 and r2_rows[b] == 0 for b in range(n_b)):
            continue  # image condition unsatisfiable for this r1
        ok = True
        for i in range(n_i):
            comp = 0
            row = r1_rows[i]
            b = 0
            while row:
                if row & 1:
                    comp |= r2_rows[b]
                row >>= 1
                b += 1
            if want_td:
                if comp != r_rows[i]:
                    ok = False
                    break
            else:
                if (comp != 0) != (r_rows[i] != 0):
                    ok = False
                    break
        if not ok:
            continue
        r1 = ExplicitRelation.of(
            inst.input,
            inst.intermediate,
            (
                (inst.input.symbols[i], inst.intermediate.symbols[b])
                for i in range(n_i)
                for b in range(n_b)
                if r1_rows[i] >> b & 1
            ),
        )
        r2 = ExplicitRelation.of(
            inst.intermediate,
            inst.output,
            (
                (inst.intermediate.symbols[b], inst.output.symbols[o])
                for b in range(n_b)
                for o in range(n_o)
                if r2_rows[b] >> o & 1
            ),
        )
        witness = ExplicitWitness(r1, r2)
        report = check_conditions(inst, witness)
        if not report.holds:  # pragma: no cover - internal consistency guard
            raise AssertionError(f"brute force produced a bad witness: {report}")
        return SolveResult(True, witness, {"candidates_tried": tried})
    return SolveResult(False, None, {"candidates_tried": tried})


def random_relation(rng, source: Domain, target: Domain, density: float = 0.5):
    """Seeded random relation; shared by tests and demo tooling."""
    pairs = {
        (a, b)
        for a, b in itertools.product(source.symbols, target.symbols)
        if rng.random() < density
    }
    return ExplicitRelation(source, target, frozenset(pairs))
