"""Decomposition procedures for length-preserving automatic relations.

A relation over words is given as a total DFA reading one (input, output)
letter pair per step.  Hints fix one side of the decomposition; the other
side's largest possible completion is an automaton built by a synchronized
product with implication acceptance followed by a universal subset
construction.  The track naming convention is fixed: "in" for the input
alphabet, "mid" for the intermediate, "out" for the output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import CapExceededError, DomainMismatchError, ValidationError
from .automata import (
    EXISTENTIAL,
    UNIVERSAL,
    Dfa,
    Nfa,
    TrackAlphabet,
    Word,
    contains,
    determinize,
    enumerate_bounded,
    map_letters,
    product,
    project,
    rename_tracks,
    shortest_word,
)
from .relations import (
    Domain,
    ExplicitInstance,
    ExplicitRelation,
    ExplicitWitness,
    Mode,
    SolveResult,
)
from .explicit_solver import solve_explicit

IN, MID, OUT = "in", "mid", "out"


def relation_dfa(dfa: Dfa, left: str = IN, right: str = OUT) -> Dfa:
    """Canonicalize a two-track relation automaton's track names."""
    if len(dfa.alphabet.tracks) != 2:
        raise ValidationError("a relation automaton needs exactly two tracks")
    return rename_tracks(dfa, [left, right])


@dataclass(frozen=True)
class AutomaticInstance:
    """Alphabets plus the relation DFA over (input, output) letter pairs."""

    sigma_i: Domain
    sigma_b: Domain
    sigma_o: Domain
    relation: Dfa
    mode: Mode

    def __post_init__(self):
        if len(self.relation.alphabet.tracks) != 2:
            raise ValidationError("relation automaton needs exactly two tracks")
        doms = self.relation.alphabet.domains
        if doms[0].symbols != self.sigma_i.symbols:
            raise DomainMismatchError("relation input track != sigma_i")
        if doms[1].symbols != self.sigma_o.symbols:
            raise DomainMismatchError("relation output track != sigma_o")
        object.__setattr__(self, "relation", relation_dfa(self.relation))
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(self.mode))


R1_GIVEN = "r1"
R2_GIVEN = "r2"


def _check_hint_tracks(inst: AutomaticInstance, hint: Dfa, side: str) -> Dfa:
    if len(hint.alphabet.tracks) != 2:
        raise ValidationError("hint automaton needs exactly two tracks")
    doms = hint.alphabet.domains
    if side == R1_GIVEN:
        if doms[0].symbols != inst.sigma_i.symbols or doms[1].symbols != inst.sigma_b.symbols:
            raise DomainMismatchError("r1 hint tracks must be (sigma_i, sigma_b)")
        return rename_tracks(hint, [IN, MID])
    if side == R2_GIVEN:
        if doms[0].symbols != inst.sigma_b.symbols or doms[1].symbols != inst.sigma_o.symbols:
            raise DomainMismatchError("r2 hint tracks must be (sigma_b, sigma_o)")
        return rename_tracks(hint, [MID, OUT])
    raise ValidationError(f"side must be {R1_GIVEN!r} or {R2_GIVEN!r}")


def max_complement_dfa(
    inst: AutomaticInstance, hint: Dfa, side: str, state_cap: int = 10**6
) -> Dfa:
    """DFA for the largest relation completing the hint.

    r1 given: pair the hint with the relation on the shared input track,
    accept when hint-acceptance implies relation-acceptance, drop the input
    track, then determinize universally - a (mid, out) word survives exactly
    when every input word the hint routes to it is related to the output.
    The empty subset accepts, so mid words the hint never produces are
    unconstrained.

    r2 given: the mirrored construction over the shared output track, with
    an extra product against Dom(hint) because r1 members need their mid
    word to actually have a successor.
    """
    hint = _check_hint_tracks(inst, hint, side)
    rel = inst.relation
    if side == R1_GIVEN:
        prod = product(
            hint,
            rel,
            sync=[(IN, IN)],
            accept=lambda p, q: p not in hint.accepting or q in rel.accepting,
        )
        return determinize(project(prod, [MID, OUT]), UNIVERSAL, state_cap)
    prod = product(
        rel,
        hint,
        sync=[(OUT, OUT)],
        accept=lambda q, p: p not in hint.accepting or q in rel.accepting,
    )
    all_but_domain = determinize(project(prod, [IN, MID]), UNIVERSAL, state_cap)
    dom_hint = determinize(project(hint, [MID]), EXISTENTIAL, state_cap)
    paired = product(all_but_domain, dom_hint, sync=[(MID, MID)])
    return determinize(paired, EXISTENTIAL, state_cap)


def compose_dfas(r1: Dfa, r2: Dfa) -> Nfa:
    """Automaton for the relational composition; nondeterministic in general."""
    joined = product(r1, r2, sync=[(MID, MID)])
    return project(joined, [IN, OUT])


@dataclass(frozen=True)
class AutomaticHintResult:
    feasible: bool
    r1: Optional[Dfa]
    r2: Optional[Dfa]
    failed_condition: Optional[str] = None
    counterexample: Optional[Word] = None


def check_hint_automatic(
    inst: AutomaticInstance, hint: Dfa, side: str, state_cap: int = 10**6
) -> AutomaticHintResult:
    """Build the maximal complement, then verify the decomposition conditions.

    All containment checks run on the lazy product with a universal-subset
    complement, so nothing beyond the complement construction itself is
    determinized up front.
    """
    hint = _check_hint_tracks(inst, hint, side)
    comp = max_complement_dfa(inst, hint, side, state_cap)
    r1, r2 = (hint, comp) if side == R1_GIVEN else (comp, hint)
    rel = inst.relation

    cex = contains(project(r1, [MID]), project(r2, [MID]), state_cap)
    if cex is not None:
        return AutomaticHintResult(False, None, None, "image-not-covered", cex)
    composed = compose_dfas(r1, r2)
    cex = contains(composed, rel, state_cap)
    if cex is not None:
        return AutomaticHintResult(False, None, None, "composition-exceeds", cex)
    if inst.mode is Mode.TD:
        cex = contains(rel, composed, state_cap)
        if cex is not None:
            return AutomaticHintResult(False, None, None, "composition-misses", cex)
    else:
        cex = contains(project(rel, [IN]), project(composed, [IN]), state_cap)
        if cex is not None:
            return AutomaticHintResult(False, None, None, "domain-not-covered", cex)
    return AutomaticHintResult(True, r1, r2)


# -- unary intermediate alphabet ----------------------------------------------------


@dataclass(frozen=True)
class UnaryResult:
    feasible: bool
    r1: Optional[Dfa] = None
    r2: Optional[Dfa] = None
    counterexample: Optional[tuple[Word, Word]] = None


def solve_unary(inst: AutomaticInstance) -> UnaryResult:
    """Decide decomposability through a one-letter channel.

    Through a unary channel every length-n domain word meets every length-n
    image word, so a solution exists exactly when Dom(R) x Img(R), matched
    by length, stays inside R.  The refutation automaton pairs a domain
    word, an image word and a rejecting relation run; its shortest accepted
    word is the canonical counterexample.
    """
    if len(inst.sigma_b) != 1:
        raise ValidationError("solve_unary needs a unary intermediate alphabet")
    rel = inst.relation
    b = inst.sigma_b.symbols[0]
    dom_nfa = project(rel, [IN])
    img_nfa = project(rel, [OUT])
    paired = product(dom_nfa, img_nfa)  # tracks (in, out), no sync
    refute = product(
        paired,
        rel,
        sync=[(IN, IN), (OUT, OUT)],
        accept=lambda p, q: p in paired.accepting and q not in rel.accepting,
    )
    witness = shortest_word(refute)
    if witness is not None:
        i_word = tuple((l[0],) for l in witness)
        o_word = tuple((l[1],) for l in witness)
        return UnaryResult(False, counterexample=(i_word, o_word))
    mid_in = TrackAlphabet([(IN, inst.sigma_i), (MID, inst.sigma_b)])
    mid_out = TrackAlphabet([(MID, inst.sigma_b), (OUT, inst.sigma_o)])
    r1 = determinize(
        map_letters(rel, mid_in, lambda l: (l[0], b)), EXISTENTIAL
    )
    r2 = determinize(
        map_letters(rel, mid_out, lambda l: (b, l[1])), EXISTENTIAL
    )
    return UnaryResult(True, r1=r1, r2=r2)


# -- reduction to a binary intermediate alphabet --------------------------------------


BINARY = Domain("binary", ("0", "1"))


def _bin_codes(domain: Domain, m: int) -> dict[str, str]:
    return {s: format(k, f"0{m}b") for k, s in enumerate(domain.symbols)}


def _split_edges(dfa: Dfa, m: int, letter_path, result_domains) -> Nfa:
    """Replace each edge by an m-edge path labeled per ``letter_path``.

    Fresh intermediate states are non-accepting and private to their edge.
    The result may be nondeterministic (distinct letters can share a label
    prefix after rewriting), so callers determinize where a DFA is needed.
    """
    transitions = []
    fresh = dfa.state_count
    for s, letter, t in sorted(
        dfa.transitions, key=lambda e: (e[0], dfa.alphabet.rank(e[1]), e[2])
    ):
        labels = letter_path(letter)
        chain = [s] + [fresh + k for k in range(m - 1)] + [t]
        fresh += m - 1
        for k in range(m):
            transitions.append((chain[k], labels[k], chain[k + 1]))
    alphabet = TrackAlphabet(
        [(n, d) for n, d in zip(dfa.alphabet.names, result_domains)]
    )
    return Nfa(alphabet, fresh, dfa.initial, transitions, dfa.accepting)


def reduce_to_binary(inst: AutomaticInstance) -> AutomaticInstance:
    """Rewrite an instance with |mid alphabet| = 2^m over the binary alphabet.

    Every relation edge becomes a path of m identically labeled edges, so
    accepted word lengths are scaled by m and each original mid letter
    corresponds to its m-bit code.  Alphabets that are not a power of two
    are refused: no answer-preserving rewriting to the binary channel is
    known for them.
    """
    size = len(inst.sigma_b)
    m = size.bit_length() - 1
    if size < 2 or 2**m != size:
        raise ValidationError(
            f"intermediate alphabet size {size} is not a power of two; "
            "no reduction to the binary alphabet is known"
        )

    split = _split_edges(
        inst.relation, m, lambda letter: [letter] * m, inst.relation.alphabet.domains
    )
    # Identical labels along each path keep the rewriting deterministic.
    reduced = Dfa(
        split.alphabet, split.state_count, split.initial, split.transitions,
        split.accepting,
    )
    return AutomaticInstance(inst.sigma_i, BINARY, inst.sigma_o, reduced, inst.mode)


def translate_hint_r1(inst: AutomaticInstance, hint: Dfa) -> Dfa:
    """Carry an r1 hint over to the reduced instance: (i, b) -> (i^m, bits(b))."""
    size = len(inst.sigma_b)
    m = size.bit_length() - 1
    if size < 2 or 2**m != size:
        raise ValidationError("hint translation needs a power-of-two mid alphabet")
    hint = _check_hint_tracks(inst, hint, R1_GIVEN)
    codes = _bin_codes(inst.sigma_b, m)

    def path(letter):
        i, b = letter
        return [(i, bit) for bit in codes[b]]

    split = _split_edges(hint, m, path, (hint.alphabet.domains[0], BINARY))
    return determinize(split, EXISTENTIAL)


def translate_hint_r2(inst: AutomaticInstance, hint: Dfa) -> Dfa:
    """Carry an r2 hint over: (b, o) -> (bits(b), o^m)."""
    size = len(inst.sigma_b)
    m = size.bit_length() - 1
    if size < 2 or 2**m != size:
        raise ValidationError("hint translation needs a power-of-two mid alphabet")
    hint = _check_hint_tracks(inst, hint, R2_GIVEN)
    codes = _bin_codes(inst.sigma_b, m)

    def path(letter):
        b, o = letter
        return [(bit, o) for bit in codes[b]]

    split = _split_edges(hint, m, path, (BINARY, hint.alphabet.domains[1]))
    return determinize(split, EXISTENTIAL)


# -- joint witness (single automaton over all three tracks) ----------------------------


@dataclass(frozen=True)
class JointReport:
    holds: bool
    failed_condition: Optional[str] = None
    counterexample: Optional[Word] = None

    def __bool__(self):
        return self.holds


def verify_joint_witness(
    inst: AutomaticInstance, joint: Dfa, state_cap: int = 10**6
) -> JointReport:
    """Check a three-track automaton as a decomposition certificate.

    Coverage: total mode needs every relation pair to appear under some mid
    word, partial mode needs every domain word to appear.  Cross-consistency:
    two joint words sharing their mid word may be crossed, and both crossed
    (input, output) pairs must land back in the relation.
    """
    if len(joint.alphabet.tracks) != 3:
        raise ValidationError("a joint witness needs exactly three tracks")
    doms = joint.alphabet.domains
    for dom, sigma, label in (
        (doms[0], inst.sigma_i, "sigma_i"),
        (doms[1], inst.sigma_b, "sigma_b"),
        (doms[2], inst.sigma_o, "sigma_o"),
    ):
        if dom.symbols != sigma.symbols:
            raise DomainMismatchError(f"joint witness track does not match {label}")
    joint = rename_tracks(joint, [IN, MID, OUT])
    rel = inst.relation

    if inst.mode is Mode.TD:
        cex = contains(rel, project(joint, [IN, OUT]), state_cap)
        if cex is not None:
            return JointReport(False, "relation-pair-uncovered", cex)
    else:
        cex = contains(project(rel, [IN]), project(joint, [IN]), state_cap)
        if cex is not None:
            return JointReport(False, "domain-uncovered", cex)

    crossed = product(joint, joint, sync=[(MID, MID)])
    # tracks now: in, mid, out, in', out'
    for keep in (["in", "out'"], ["in'", "out"]):
        side = rename_tracks(project(crossed, keep), [IN, OUT])
        cex = contains(side, rel, state_cap)
        if cex is not None:
            return JointReport(False, "cross-consistency", cex)
    return JointReport(True)


# -- counting and the exponential-bound check ------------------------------------------


@dataclass(frozen=True)
class WordCountTable:
    """Exact per-length acceptance counts c_0..c_N."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValidationError("counts must be non-negative")


def count_words(d: Dfa, n: int) -> WordCountTable:
    """Count accepted words per length via the letter-count transfer matrix.

    Exact arbitrary-precision arithmetic; determinism of ``d`` makes paths
    and words coincide.
    """
    if n < 0:
        raise ValidationError("n must be non-negative")
    size = d.state_count
    matrix = [[0] * size for _ in range(size)]
    for (s, _letter), t in d.delta.items():
        matrix[s][t] += 1
    vec = [0] * size
    vec[d.initial] = 1
    counts = []
    for _ in range(n + 1):
        counts.append(sum(vec[q] for q in d.accepting))
        vec = [
            sum(vec[s] * matrix[s][t] for s in range(size) if matrix[s][t])
            for t in range(size)
        ]
    return WordCountTable(tuple(counts))


@dataclass(frozen=True)
class EbpReport:
    """Bounded exponential-bound check: ok up to N, or least violating n."""

    ok_up_to: Optional[int] = None
    violation: Optional[tuple[int, int]] = None

    def __bool__(self):
        return self.violation is None


def ebp_check(d: Dfa, n: int) -> EbpReport:
    """Report the least length whose count exceeds 2^length, if any below n.

    This checks a finite prefix only; it never decides the unbounded
    question.
    """
    counts = count_words(d, n).counts
    for k, c in enumerate(counts):
        if c > 2**k:
            return EbpReport(violation=(k, c))
    return EbpReport(ok_up_to=n)


# -- length-sliced bounded oracle -------------------------------------------------------


def _join_word(word: tuple[str, ...]) -> str:
    if any(len(s) != 1 for s in word):
        return ",".join(word)
    return "".join(word)


def slice_domain(name: str, sigma: Domain, k: int) -> Domain:
    """All length-k words over sigma as an explicit domain, lexicographic."""
    words = itertools.product(sigma.symbols, repeat=k)
    return Domain(name, tuple(_join_word(w) for w in words))


def slice_relation(dfa: Dfa, k: int) -> set[tuple[str, str]]:
    """The length-k slice of a two-track relation as explicit symbol pairs."""
    pairs = set()
    for word in enumerate_bounded(dfa, k)[k]:
        left = _join_word(tuple(l[0] for l in word))
        right = _join_word(tuple(l[1] for l in word))
        pairs.add((left, right))
    return pairs


def slice_instance(inst: AutomaticInstance, k: int) -> ExplicitInstance:
    """The length-k slice as an explicit decomposition instance."""
    din = slice_domain("input", inst.sigma_i, k)
    dout = slice_domain("output", inst.sigma_o, k)
    dmid = slice_domain("mid", inst.sigma_b, k)
    pairs = slice_relation(inst.relation, k)
    return ExplicitInstance(
        din, dout, dmid, ExplicitRelation.of(din, dout, pairs), inst.mode
    )


@dataclass(frozen=True)
class BoundedCheckResult:
    """Per-length verdicts; feasibility here is necessary, never sufficient.

    Each length slice is decided exactly, but gluing feasible slices into a
    single automatic decomposition needs regularity this check cannot see.
    """

    feasible_up_to: Optional[int] = None
    witnesses: tuple[SolveResult, ...] = ()
    failed_length: Optional[int] = None

    def __bool__(self):
        return self.failed_length is None


def bounded_decomposition_check(
    inst: AutomaticInstance, n: int, max_slice_cells: int = 4096
) -> BoundedCheckResult:
    """Solve every length slice up to n as an explicit instance.

    Slices are independent because the relations are length-preserving.  The
    per-slice solver is the CNF route; slice sizes grow exponentially, so a
    cap on |inputs| * |mids| guards the expansion.
    """
    witnesses = []
    for k in range(n + 1):
        cells = (len(inst.sigma_i) ** k) * (len(inst.sigma_b) ** k)
        if cells > max_slice_cells:
            raise CapExceededError(
                f"slice {k} needs {cells} candidate cells > cap {max_slice_cells}",
                {"length": k, "cells": cells},
            )
        result = solve_explicit(slice_instance(inst, k))
        if not result.feasible:
            return BoundedCheckResult(
                feasible_up_to=None, witnesses=tuple(witnesses), failed_length=k
            )
        witnesses.append(result)
    return BoundedCheckResult(feasible_up_to=n, witnesses=tuple(witnesses))
