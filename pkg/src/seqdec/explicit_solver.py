"""Exact explicit decomposition solving via CNF, plus hint-based procedures.

The encoding uses four variable blocks, 0-based role indices mapped to
1-based solver variables:

  x(i,b) = i*|B| + b + 1                membership of (input_i, mid_b) in r1
  y(b,o) = |I||B| + b*|O| + o + 1       membership of (mid_b, out_o) in r2
  d(b)   = |I||B| + |B||O| + b + 1      "mid_b has an r2 successor"
  z(i,b,o)                              selector: pair (i,o) of R covered via b
                                        (total mode only; allocated per R pair)

Total-mode clauses: for pairs outside R no x/y bridge may exist; every pair
of R owns a selector clause tying it to some bridge; x(i,b) forces d(b) which
forces a non-empty y row.  Partial mode drops the selectors and instead pins
Dom(r1) to Dom(R) with coverage and exclusion clauses.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CapExceededError, DomainMismatchError, ValidationError
from .relations import (
    ConditionReport,
    Domain,
    ExplicitInstance,
    ExplicitRelation,
    ExplicitWitness,
    Mode,
    SolveResult,
    check_conditions,
)
from .sat import CnfSolver


@dataclass(frozen=True)
class CnfFormula:
    """A CNF with its role-to-variable map for decoding models."""

    var_count: int
    clauses: tuple[tuple[int, ...], ...]
    var_map: dict

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.var_count} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in cl) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    def var_map_json(self) -> str:
        sidecar = {
            "x": [[i, b, v] for (i, b), v in sorted(self.var_map["x"].items())],
            "y": [[b, o, v] for (b, o), v in sorted(self.var_map["y"].items())],
            "d": [[b, v] for b, v in sorted(self.var_map["d"].items())],
            "z": [[i, b, o, v] for (i, b, o), v in sorted(self.var_map["z"].items())],
        }
        return json.dumps(sidecar, sort_keys=True)


def encode_cnf(inst: ExplicitInstance) -> CnfFormula:
    """Encode the instance; models correspond exactly to valid witnesses."""
    n_i, n_b, n_o = len(inst.input), len(inst.intermediate), len(inst.output)
    x = {(i, b): i * n_b + b + 1 for i in range(n_i) for b in range(n_b)}
    y = {
        (b, o): n_i * n_b + b * n_o + o + 1 for b in range(n_b) for o in range(n_o)
    }
    d = {b: n_i * n_b + n_b * n_o + b + 1 for b in range(n_b)}
    var_count = n_i * n_b + n_b * n_o + n_b

    in_r = {
        (inst.input.index(i), inst.output.index(o)) for i, o in inst.relation.pairs
    }
    r_pairs = sorted(in_r)
    z: dict[tuple[int, int, int], int] = {}
    clauses: list[list[int]] = []

    # (a) pairs outside R must not be bridged
    for i in range(n_i):
        for o in range(n_o):
            if (i, o) in in_r:
                continue
            for b in range(n_b):
                clauses.append([-x[i, b], -y[b, o]])

    if inst.mode is Mode.TD:
        # (b) every R pair is covered by a selected bridge
        for i, o in r_pairs:
            for b in range(n_b):
                var_count += 1
                z[i, b, o] = var_count
            clauses.append([z[i, b, o] for b in range(n_b)])
            for b in range(n_b):
                clauses.append([-z[i, b, o], x[i, b]])
                clauses.append([-z[i, b, o], y[b, o]])

    # (c) image condition: used mid symbols need an r2 successor
    for i in range(n_i):
        for b in range(n_b):
            clauses.append([-x[i, b], d[b]])
    for b in range(n_b):
        clauses.append([-d[b]] + [y[b, o] for o in range(n_o)])

    if inst.mode is Mode.PD:
        dom = {i for i, _ in in_r}
        for i in range(n_i):
            if i in dom:
                clauses.append([x[i, b] for b in range(n_b)])
            else:
                for b in range(n_b):
                    clauses.append([-x[i, b]])

    return CnfFormula(
        var_count,
        tuple(tuple(cl) for cl in clauses),
        {"x": x, "y": y, "d": d, "z": z},
    )


def decode_witness(inst: ExplicitInstance, formula: CnfFormula, model) -> ExplicitWitness:
    r1 = ExplicitRelation.of(
        inst.input,
        inst.intermediate,
        (
            (inst.input.symbols[i], inst.intermediate.symbols[b])
            for (i, b), v in formula.var_map["x"].items()
            if model[v]
        ),
    )
    r2 = ExplicitRelation.of(
        inst.intermediate,
        inst.output,
        (
            (inst.intermediate.symbols[b], inst.output.symbols[o])
            for (b, o), v in formula.var_map["y"].items()
            if model[v]
        ),
    )
    return ExplicitWitness(r1, r2)


def solve_explicit(inst: ExplicitInstance, max_conflicts: int = 1_000_000) -> SolveResult:
    """Encode, search, decode; feasible witnesses are re-verified before return."""
    formula = encode_cnf(inst)
    solver = CnfSolver(formula.var_count, formula.clauses, max_conflicts)
    model = solver.solve()
    stats = {"vars": formula.var_count, "clauses": len(formula.clauses)}
    stats.update(solver.stats())
    if model is None:
        return SolveResult(False, None, stats)
    witness = decode_witness(inst, formula, model)
    report = check_conditions(inst, witness)
    if not report.holds:  # pragma: no cover - encoding soundness guard
        raise AssertionError(f"decoded witness failed re-verification: {report}")
    return SolveResult(True, witness, stats)


# -- hint-based solving -------------------------------------------------------


R1_GIVEN = "r1"
R2_GIVEN = "r2"


def max_complement(
    inst: ExplicitInstance, hint: ExplicitRelation, side: str
) -> ExplicitRelation:
    """Largest relation completing the hint without adding forbidden pairs.

    Hint on the input side: keep (b, o) when every input mapped to b relates
    to o.  Hint on the output side: keep (i, b) when b has some successor and
    every successor of b relates back from i.
    """
    rel = inst.relation
    if side == R1_GIVEN:
        if hint.source != inst.input or hint.target != inst.intermediate:
            raise DomainMismatchError("hint r1 domains do not match the instance")
        pairs = {
            (b, o)
            for b in inst.intermediate
            for o in inst.output
            if all((i, o) in rel.pairs for i, bb in hint.pairs if bb == b)
        }
        return ExplicitRelation.of(inst.intermediate, inst.output, pairs)
    if side == R2_GIVEN:
        if hint.source != inst.intermediate or hint.target != inst.output:
            raise DomainMismatchError("hint r2 domains do not match the instance")
        dom2 = hint.dom()
        pairs = {
            (i, b)
            for i in inst.input
            for b in inst.intermediate
            if b in dom2
            and all((i, o) in rel.pairs for bb, o in hint.pairs if bb == b)
        }
        return ExplicitRelation.of(inst.input, inst.intermediate, pairs)
    raise ValidationError(f"side must be {R1_GIVEN!r} or {R2_GIVEN!r}, got {side!r}")


@dataclass(frozen=True)
class HintResult:
    feasible: bool
    witness: Optional[ExplicitWitness]
    complement: ExplicitRelation
    report: ConditionReport


def solve_with_hint(inst: ExplicitInstance, hint: ExplicitRelation, side: str) -> HintResult:
    """Feasibility with one side fixed: the maximal complement decides.

    Any completion of the hint is contained in the maximal complement, and
    the pair succeeds for some completion exactly when it succeeds for the
    maximal one, so a single condition check settles the question.
    """
    comp = max_complement(inst, hint, side)
    witness = (
        ExplicitWitness(hint, comp) if side == R1_GIVEN else ExplicitWitness(comp, hint)
    )
    report = check_conditions(inst, witness)
    if report.holds:
        return HintResult(True, witness, comp, report)
    return HintResult(False, None, comp, report)


# -- hardness-reduction converters ---------------------------------------------


@dataclass(frozen=True)
class CcbsInstance:
    """Cover a bipartite graph with k complete bipartite subgraphs."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    k: int

    def __post_init__(self):
        if self.k <= 0:
            raise ValidationError("k must be positive")
        if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
            raise ValidationError("duplicate vertices")
        touched_l = {u for u, _ in self.edges}
        touched_r = {v for _, v in self.edges}
        for u, v in self.edges:
            if u not in self.left or v not in self.right:
                raise ValidationError(f"edge ({u!r},{v!r}) uses unknown vertices")
        if touched_l != set(self.left) or touched_r != set(self.right):
            raise ValidationError("every vertex must have an incident edge")


def from_ccbs(g: CcbsInstance) -> ExplicitInstance:
    """Biclique covering as a total decomposition question."""
    din = Domain("input", g.left)
    dout = Domain("output", g.right)
    dmid = Domain("mid", tuple(f"u{j + 1}" for j in range(g.k)))
    return ExplicitInstance(din, dout, dmid, ExplicitRelation(din, dout, g.edges), Mode.TD)


def witness_to_biclique_cover(
    g: CcbsInstance, w: ExplicitWitness
) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Read a verified biclique cover off a total-mode witness."""
    inst = from_ccbs(g)
    report = check_conditions(inst, w)
    if not report.holds:
        raise ValidationError(f"witness does not solve the converted instance: {report}")
    cover = []
    for u in inst.intermediate:
        lhs = tuple(v for v in g.left if (v, u) in w.r1.pairs)
        rhs = tuple(v for v in g.right if (u, v) in w.r2.pairs)
        if lhs and rhs:
            cover.append((lhs, rhs))
    covered = set()
    for lhs, rhs in cover:
        for u, v in itertools.product(lhs, rhs):
            if (u, v) not in g.edges:  # pragma: no cover - guarded by the check above
                raise AssertionError("cover block is not a biclique")
            covered.add((u, v))
    if covered != set(g.edges):  # pragma: no cover
        raise AssertionError("cover misses edges")
    return cover


@dataclass(frozen=True)
class SetCoverInstance:
    """Choose k of the given subsets so their union is everything."""

    elements: tuple[str, ...]
    subsets: tuple[frozenset[str], ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "subsets", tuple(frozenset(s) for s in self.subsets))
        if self.k <= 0:
            raise ValidationError("k must be positive")
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError("duplicate elements")
        for s in self.subsets:
            if not s <= set(self.elements):
                raise ValidationError("subset contains unknown elements")
        missing = set(self.elements) - set().union(*self.subsets) if self.subsets else set(self.elements)
        if missing:
            raise ValidationError(f"elements {sorted(missing)} belong to no subset")


def from_set_cover(s: SetCoverInstance) -> ExplicitInstance:
    """Set covering as a partial decomposition question."""
    din = Domain("input", s.elements)
    dout = Domain("output", tuple(f"c{j}" for j in range(len(s.subsets))))
    dmid = Domain("mid", tuple(f"b{j + 1}" for j in range(s.k)))
    pairs = {
        (a, f"c{j}") for j, sub in enumerate(s.subsets) for a in sub
    }
    return ExplicitInstance(din, dout, dmid, ExplicitRelation.of(din, dout, pairs), Mode.PD)


def witness_to_cover(s: SetCoverInstance, w: ExplicitWitness) -> list[int]:
    """Pick one subset per used mid symbol; the selection provably covers."""
    inst = from_set_cover(s)
    report = check_conditions(inst, w)
    if not report.holds:
        raise ValidationError(f"witness does not solve the converted instance: {report}")
    chosen = set()
    for b in inst.intermediate:
        if b not in w.r1.img():
            continue
        successors = sorted(w.r2.img_of(b), key=inst.output.index)
        chosen.add(inst.output.index(successors[0]))
    covered = set().union(*(s.subsets[j] for j in chosen)) if chosen else set()
    if covered != set(s.elements):  # pragma: no cover - guarded by the check above
        raise AssertionError("selection does not cover all elements")
    return sorted(chosen)
