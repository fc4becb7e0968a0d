"""Transducer synthesis via safety games, with exhaustive small oracles."""

import itertools
import random

import pytest

from seqdec.errors import DomainMismatchError, ValidationError
from seqdec.automata import Dfa, TrackAlphabet, universal_dfa
from seqdec.automatic import IN, OUT, AutomaticInstance
from seqdec.relations import Domain, Mode
from seqdec.strategic import (
    T1_GIVEN,
    T2_GIVEN,
    MooreTransducer,
    StrategicWitness,
    solve_strategic,
    solve_strategic_hint,
    transduce,
    verify_witness_bounded,
)

BIN = Domain("bin", ("0", "1"))
UNARY = Domain("unary", ("0",))


def alpha2(ld, rd):
    return TrackAlphabet([(IN, ld), (OUT, rd)])


def identity_relation(dom=BIN):
    alpha = alpha2(dom, dom)
    eq = [l for l in alpha.letters() if l[0] == l[1]]
    ne = [l for l in alpha.letters() if l[0] != l[1]]
    trans = [(0, l, 0) for l in eq] + [(0, l, 1) for l in ne]
    trans += [(1, l, 1) for l in alpha.letters()]
    return Dfa(alpha, 2, 0, trans, [0])


def instance(rel, sigma_b, mode=Mode.PD, sigma=BIN):
    return AutomaticInstance(sigma, sigma_b, sigma, rel, mode)


def random_total_dfa(rng, alpha, max_states=3):
    n = rng.randint(1, max_states)
    letters = list(alpha.letters())
    trans = [(s, l, rng.randrange(n)) for s in range(n) for l in letters]
    accepting = [q for q in range(n) if rng.random() < 0.6]
    return Dfa(alpha, n, 0, trans, accepting)


def all_transducers(in_dom, out_dom, max_states=2):
    """Every Moore machine up to the given state count (initial fixed at 0)."""
    for n in range(1, max_states + 1):
        rows = itertools.product(
            itertools.product(range(n), repeat=len(in_dom)), repeat=n
        )
        for delta in rows:
            for outs in itertools.product(out_dom.symbols, repeat=n):
                yield MooreTransducer(in_dom, out_dom, n, 0, delta, outs)


# -- transduction ------------------------------------------------------------------


def test_transduce_identity():
    t = MooreTransducer.identity(Domain("letters", ("a", "b")))
    assert transduce(t, ("a", "b", "b", "a")) == ("a", "b", "b", "a")
    assert transduce(t, ()) == ()


def test_transduce_constant():
    t = MooreTransducer.constant(BIN, BIN, "1")
    assert transduce(t, ("0", "1", "0")) == ("1", "1", "1")


def test_transduce_matches_step_simulation():
    rng = random.Random(61)
    for _ in range(20):
        n = rng.randint(1, 4)
        delta = tuple(
            tuple(rng.randrange(n) for _ in BIN.symbols) for _ in range(n)
        )
        outs = tuple(rng.choice(BIN.symbols) for _ in range(n))
        t = MooreTransducer(BIN, BIN, n, 0, delta, outs)
        word = tuple(rng.choice(BIN.symbols) for _ in range(6))
        state, expected = 0, []
        for letter in word:
            state = delta[state][BIN.index(letter)]
            expected.append(outs[state])
        assert transduce(t, word) == tuple(expected)


def test_transducer_validation():
    with pytest.raises(ValidationError):
        MooreTransducer(BIN, BIN, 1, 0, ((0,),), ("0",))  # short delta row
    with pytest.raises(ValidationError):
        MooreTransducer(BIN, BIN, 1, 0, ((0, 0),), ("x",))  # foreign output


# -- full synthesis -------------------------------------------------------------------


def test_identity_over_binary_channel_feasible():
    inst = instance(identity_relation(), BIN)
    res = solve_strategic(inst)
    assert res.feasible
    check = verify_witness_bounded(inst, res.witness, 6)
    assert check.ok
    # The synthesized pair must behave as the identity end to end.
    for word in itertools.product(BIN.symbols, repeat=3):
        mids = transduce(res.witness.t1, word)
        assert transduce(res.witness.t2, mids) == word


def test_identity_over_unary_channel_infeasible():
    inst = instance(identity_relation(), UNARY)
    res = solve_strategic(inst)
    assert not res.feasible


def test_universal_relation_feasible():
    inst = instance(universal_dfa(alpha2(BIN, BIN)), BIN)
    res = solve_strategic(inst)
    assert res.feasible
    assert verify_witness_bounded(inst, res.witness, 5).ok


def test_partial_domain_is_infeasible():
    # Relation accepting only pairs starting with input 0: input 1 is
    # unresolvable, and every input word must be servable.
    alpha = alpha2(BIN, BIN)
    trans = [(0, l, 1 if l[0] == "0" else 2) for l in alpha.letters()]
    trans += [(1, l, 1) for l in alpha.letters()]
    trans += [(2, l, 2) for l in alpha.letters()]
    rel = Dfa(alpha, 3, 0, trans, [1])
    res = solve_strategic(instance(rel, BIN))
    assert not res.feasible


def test_solver_is_deterministic():
    inst = instance(identity_relation(), BIN)
    a = solve_strategic(inst)
    b = solve_strategic(inst)
    assert a.witness == b.witness


# -- hints ------------------------------------------------------------------------------


def test_hint_t1_identity_recovers_t2():
    inst = instance(identity_relation(), BIN)
    res = solve_strategic_hint(inst, MooreTransducer.identity(BIN), T1_GIVEN)
    assert res.feasible
    assert verify_witness_bounded(inst, res.witness, 5).ok


def test_hint_t1_constant_infeasible():
    inst = instance(identity_relation(), BIN)
    hint = MooreTransducer.constant(BIN, BIN, "0")
    res = solve_strategic_hint(inst, hint, T1_GIVEN)
    assert not res.feasible


def test_hint_t2_identity_recovers_t1():
    inst = instance(identity_relation(), BIN)
    res = solve_strategic_hint(inst, MooreTransducer.identity(BIN), T2_GIVEN)
    assert res.feasible
    assert verify_witness_bounded(inst, res.witness, 5).ok


def test_hint_t2_game_is_polynomial_sized():
    inst = instance(identity_relation(), BIN)
    hint = MooreTransducer.identity(BIN)
    res = solve_strategic_hint(inst, hint, T2_GIVEN)
    bound = inst.relation.state_count * hint.state_count * len(inst.sigma_i)
    assert res.stats["phase2"]["arena_states"] <= bound


def test_hint_alphabet_validation():
    inst = instance(identity_relation(), UNARY)
    with pytest.raises(DomainMismatchError):
        solve_strategic_hint(inst, MooreTransducer.identity(BIN), T2_GIVEN)


# -- soundness / completeness properties ---------------------------------------------------


def test_soundness_on_random_instances():
    rng = random.Random(67)
    for _ in range(50):
        rel = random_total_dfa(rng, alpha2(BIN, BIN))
        inst = instance(rel, rng.choice([BIN, UNARY]))
        res = solve_strategic(inst)
        if res.feasible:
            check = verify_witness_bounded(inst, res.witness, 6)
            assert check.ok, f"unsound witness, violation {check.violation}"


def test_one_sided_completeness_against_exhaustive_search():
    """Game infeasibility must rule out every small transducer pair."""
    rng = random.Random(71)
    checked_infeasible = 0
    for _ in range(25):
        rel = random_total_dfa(rng, alpha2(BIN, BIN), max_states=2)
        inst = instance(rel, BIN)
        res = solve_strategic(inst)
        if res.feasible:
            continue
        checked_infeasible += 1
        for t1 in all_transducers(BIN, BIN, 2):
            for t2 in all_transducers(BIN, BIN, 2):
                w = StrategicWitness(t1, t2)
                assert not verify_witness_bounded(inst, w, 6).ok, (
                    "exhaustive search found a pair the game missed"
                )
    assert checked_infeasible > 0


def test_hint_consistency():
    """A full solve's parts must individually succeed as hints."""
    rng = random.Random(73)
    solved = 0
    for _ in range(50):
        rel = random_total_dfa(rng, alpha2(BIN, BIN), max_states=3)
        inst = instance(rel, rng.choice([BIN, UNARY]))
        res = solve_strategic(inst)
        if not res.feasible:
            continue
        solved += 1
        with_t1 = solve_strategic_hint(inst, res.witness.t1, T1_GIVEN)
        assert with_t1.feasible
        with_t2 = solve_strategic_hint(inst, res.witness.t2, T2_GIVEN)
        assert with_t2.feasible
    assert solved > 0


def test_verify_witness_reports_shortest_violation():
    inst = instance(identity_relation(), BIN)
    w = StrategicWitness(
        MooreTransducer.identity(BIN), MooreTransducer.constant(BIN, BIN, "0")
    )
    check = verify_witness_bounded(inst, w, 3)
    assert not check.ok
    assert check.violation == (("1",),)  # "0" happens to survive constant-0


def test_verify_witness_universal_relation_any_pair():
    inst = instance(universal_dfa(alpha2(BIN, BIN)), BIN)
    w = StrategicWitness(
        MooreTransducer.constant(BIN, BIN, "1"), MooreTransducer.constant(BIN, BIN, "0")
    )
    assert verify_witness_bounded(inst, w, 4).ok
