"""Transducer synthesis for decompositions realized by finite-state strategies.

Feasibility here means: there are letter-by-letter strategies t1 (inputs to
mid letters) and t2 (mid letters to outputs) such that every nonempty input
word, paired with the induced output word, is accepted by the relation
automaton.  Synthesis runs as two safety games:

  Phase 1 picks t2.  Positions are sets of (relation state, pending output)
  copies: all input words that t1 might route to the same mid word, bundled
  with the output letter each copy is owed.  The synthesizer chooses, per
  copy, how every input letter would extend (a mid letter and an output
  letter); the adversary picks the mid direction to follow.  A position is
  dead when copies disagree on the pending output (no single t2 output can
  serve them) or a copy's relation state is rejecting.

  Phase 2 pins t2 and picks t1 on the product of the relation automaton
  with t2's state graph: the synthesizer maps each input letter to a mid
  letter, the adversary picks the input letter, and rejecting relation
  states are dead.

Safety games are solved by shrinking the winning set to a fixpoint over the
forward-reachable arena; extracted strategies are positional and always the
lexicographically least winning move, so returned transducers are unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from collections import deque
from typing import Optional

from .errors import CapExceededError, DomainMismatchError, ValidationError
from .automata import Dfa, Word, accepts
from .automatic import IN, OUT, AutomaticInstance
from .relations import Domain, Mode


@dataclass(frozen=True)
class MooreTransducer:
    """Deterministic letter-to-letter machine with per-state output.

    The word function is length preserving: position k of the output is the
    output letter of the state reached after k input letters.  The initial
    state's own output letter exists structurally but never appears in a
    transduced word.
    """

    input_domain: Domain
    output_domain: Domain
    state_count: int
    initial: int
    delta: tuple[tuple[int, ...], ...]  # delta[state][input letter index]
    outputs: tuple[str, ...]  # outputs[state]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.delta) != self.state_count or len(self.outputs) != self.state_count:
            raise ValidationError("delta/outputs must cover every state")
        if not 0 <= self.initial < self.state_count:
            raise ValidationError("initial state out of range")
        for row in self.delta:
            if len(row) != len(self.input_domain):
                raise ValidationError("delta rows must cover the input alphabet")
            for t in row:
                if not 0 <= t < self.state_count:
                    raise ValidationError("delta target out of range")
        for o in self.outputs:
            if o not in self.output_domain:
                raise ValidationError(f"output letter {o!r} outside the output domain")

    def step(self, state: int, letter: str) -> int:
        return self.delta[state][self.input_domain.index(letter)]

    @classmethod
    def identity(cls, domain: Domain) -> "MooreTransducer":
        """One state per letter, echoing the letter that led there."""
        n = len(domain)
        delta = tuple(tuple(k for k in range(n)) for _ in range(n + 1))
        return cls(domain, domain, n + 1, n, delta[: n + 1],
                   tuple(domain.symbols) + (domain.symbols[0],))

    @classmethod
    def constant(cls, input_domain: Domain, output_domain: Domain, letter: str) -> "MooreTransducer":
        if letter not in output_domain:
            raise ValidationError(f"{letter!r} not in the output domain")
        return cls(input_domain, output_domain, 1, 0,
                   ((0,) * len(input_domain),), (letter,))


def transduce(t: MooreTransducer, word) -> tuple[str, ...]:
    """Length-preserving application of the transducer's word function."""
    state = t.initial
    out = []
    for letter in word:
        state = t.step(state, letter)
        out.append(t.outputs[state])
    return tuple(out)


@dataclass(frozen=True)
class StrategicWitness:
    t1: MooreTransducer
    t2: MooreTransducer


@dataclass(frozen=True)
class StrategicResult:
    feasible: bool
    witness: Optional[StrategicWitness] = None
    stats: dict = field(default_factory=dict)


T1_GIVEN = "t1"
T2_GIVEN = "t2"


# -- phase 1: the subset-configuration game -------------------------------------------


class _SubsetGame:
    """Safety game over frozensets of copies with per-copy move vectors.

    ``copy_moves(copy)`` yields (move key, vector) pairs where a vector maps
    each adversary direction to the frozenset of copies it spawns there.  A
    joint move is one choice per copy; its successor in direction d is the
    union of the per-copy vectors at d.  The winning set is downward closed
    (fewer copies mean fewer obligations), which makes pruning on partial
    unions sound.
    """

    def __init__(self, n_directions, root_moves, copy_moves, is_dead, config_cap):
        self.n_directions = n_directions
        self.root_moves = root_moves  # list of (key, vector)
        self.copy_moves = copy_moves  # callable: copy -> list of (key, vector)
        self.is_dead = is_dead
        self.config_cap = config_cap
        self._move_cache: dict = {}
        self._tuple_cache: dict = {}

    def _moves_for(self, copy):
        if copy not in self._move_cache:
            self._move_cache[copy] = self.copy_moves(copy)
        return self._move_cache[copy]

    def achievable_tuples(self, config) -> list[tuple]:
        """All successor tuples (one config per direction) some joint move yields.

        Dynamic programming over copies with dedup of accumulated unions
        keeps this polynomial in the number of distinct unions rather than
        exponential in the number of copies.
        """
        if config in self._tuple_cache:
            return self._tuple_cache[config]
        acc = {tuple(frozenset() for _ in range(self.n_directions))}
        for copy in sorted(config):
            nxt = set()
            for _key, vector in self._moves_for(copy):
                for partial in acc:
                    nxt.add(
                        tuple(partial[d] | vector[d] for d in range(self.n_directions))
                    )
            acc = nxt
            if len(acc) > self.config_cap:
                raise CapExceededError(
                    "strategy search exceeded the configuration cap",
                    {"partial_tuples": len(acc), "cap": self.config_cap},
                )
        result = sorted(acc)
        self._tuple_cache[config] = result
        return result

    def solve(self):
        """Forward reach, then shrink to the safe fixpoint.

        Returns (winning set, reachable count) with the root excluded; the
        root is feasible when some root move lands every direction inside
        the winning set.
        """
        reachable: set = set()
        queue = deque()

        def discover(cfg):
            if cfg not in reachable:
                if len(reachable) >= self.config_cap:
                    raise CapExceededError(
                        "strategy search exceeded the configuration cap",
                        {"configs": len(reachable), "cap": self.config_cap},
                    )
                reachable.add(cfg)
                queue.append(cfg)

        for _key, vector in self.root_moves:
            for cfg in vector:
                discover(cfg)
        while queue:
            cfg = queue.popleft()
            if self.is_dead(cfg):
                continue
            for tup in self.achievable_tuples(cfg):
                for nxt in tup:
                    discover(nxt)

        winning = {cfg for cfg in reachable if not self.is_dead(cfg)}
        changed = True
        while changed:
            changed = False
            for cfg in sorted(winning):
                tuples = self.achievable_tuples(cfg)
                if not any(all(nxt in winning for nxt in tup) for tup in tuples):
                    winning.discard(cfg)
                    changed = True
        return winning, len(reachable)

    def best_move(self, moves, winning):
        """First (hence lexicographically least) move staying inside winning."""
        for key, vector in moves:
            if all(cfg in winning for cfg in vector):
                return key, vector
        return None

    def best_joint_move(self, config, winning):
        """Lexicographically least per-copy move combination that stays safe.

        Partial unions are generally unreachable as positions, so they are
        pruned by the downward closure of the winning family: a union with
        no winning superset cannot grow into a winning successor.  Exact
        membership is only decisive for the complete union at the leaf.
        """
        copies = sorted(config)
        chosen: list = []

        def extendable(partial):
            return all(
                not p or any(p <= w for w in winning) for p in partial
            )

        def search(k, partial):
            if k == len(copies):
                return partial if all(cfg in winning for cfg in partial) else None
            if not extendable(partial):
                return None
            for key, vector in self._moves_for(copies[k]):
                merged = tuple(
                    partial[d] | vector[d] for d in range(self.n_directions)
                )
                found = search(k + 1, merged)
                if found is not None:
                    chosen.append(key)
                    return found
            return None

        empty = tuple(frozenset() for _ in range(self.n_directions))
        result = search(0, empty)
        if result is None:
            return None
        chosen.reverse()
        return tuple(chosen), result


def _eta_moves_free(rel: Dfa, sigma_i: Domain, sigma_b: Domain, sigma_o: Domain):
    """Per-copy move vectors when the synthesizer picks mid and output letters.

    A move maps every input letter to (mid letter, output letter); its
    vector groups, per mid direction, the (next relation state, owed output)
    copies spawned by the inputs routed there.  Moves are enumerated in
    lexicographic (mid index, output index) order per input letter and
    deduplicated per distinct vector, keeping the least key.
    """
    n_b = len(sigma_b)
    choices = [
        (bi, oi) for bi in range(n_b) for oi in range(len(sigma_o))
    ]

    def moves(q: int):
        seen: dict = {}
        order: list = []
        for assignment in itertools.product(choices, repeat=len(sigma_i)):
            groups = [set() for _ in range(n_b)]
            for ii, (bi, oi) in enumerate(assignment):
                q2 = rel.delta[q, (sigma_i.symbols[ii], sigma_o.symbols[oi])]
                groups[bi].add((q2, oi))
            vector = tuple(frozenset(g) for g in groups)
            if vector not in seen:
                seen[vector] = assignment
                order.append((assignment, vector))
        return order

    return moves


def _dead_predicate(rel: Dfa):
    def is_dead(config) -> bool:
        if not config:
            return False
        if any(q not in rel.accepting for q, _oi in config):
            return True
        return len({oi for _q, oi in config}) > 1

    return is_dead


def _extract_t2(game, root_key_vector, winning, inst) -> MooreTransducer:
    """Turn the positional winning strategy into the mid-to-output transducer."""
    sigma_b, sigma_o = inst.sigma_b, inst.sigma_o
    _root_key, root_vector = root_key_vector
    index: dict = {}
    order: list = []
    delta_rows: list = []

    def visit(cfg) -> int:
        if cfg in index:
            return index[cfg]
        index[cfg] = len(order)
        order.append(cfg)
        delta_rows.append(None)
        return index[cfg]

    root_id = visit(frozenset({("root",)}))
    queue = deque()
    targets = []
    for cfg in root_vector:
        targets.append(visit(cfg))
        queue.append(cfg)
    delta_rows[root_id] = tuple(targets)
    resolved = {root_id}
    while queue:
        cfg = queue.popleft()
        cid = index[cfg]
        if cid in resolved:
            continue
        resolved.add(cid)
        if not cfg:
            delta_rows[cid] = tuple(cid for _ in sigma_b.symbols)
            continue
        found = game.best_joint_move(cfg, winning)
        if found is None:  # pragma: no cover - winning configs always move
            raise AssertionError("winning configuration lost its move")
        _keys, vector = found
        row = []
        for nxt in vector:
            row.append(visit(nxt))
            queue.append(nxt)
        delta_rows[cid] = tuple(row)
    outputs = []
    for cfg in order:
        pending = {oi for item in cfg if item != ("root",) for _q, oi in [item]}
        outputs.append(
            sigma_o.symbols[next(iter(pending))] if len(pending) == 1
            else sigma_o.symbols[0]
        )
    return MooreTransducer(
        sigma_b, sigma_o, len(order), root_id, tuple(delta_rows), tuple(outputs)
    )


def _phase1(inst: AutomaticInstance, config_cap: int):
    """Solve the t2 game; None when unwinnable, else (t2, stats)."""
    rel = inst.relation
    moves = _eta_moves_free(rel, inst.sigma_i, inst.sigma_b, inst.sigma_o)
    root_moves = []
    for assignment, vector in moves(rel.initial):
        root_moves.append((assignment, vector))
    game = _SubsetGame(
        len(inst.sigma_b), root_moves, lambda copy: moves(copy[0]),
        _dead_predicate(rel), config_cap,
    )
    winning, reachable = game.solve()
    best_root = game.best_move(root_moves, winning)
    stats = {"configs": reachable, "winning": len(winning)}
    if best_root is None:
        return None, stats
    t2 = _extract_t2(game, best_root, winning, inst)
    return t2, stats


# -- phase 2: the deterministic t1 game ------------------------------------------------


def _phase2(inst: AutomaticInstance, t2: MooreTransducer, config_cap: int):
    """Solve the t1 game against a fixed t2; None when unwinnable."""
    rel = inst.relation
    sigma_i, sigma_b = inst.sigma_i, inst.sigma_b
    n_q, n_s = rel.state_count, t2.state_count
    if n_q * n_s > config_cap:
        raise CapExceededError(
            "t1 game arena exceeds the configuration cap",
            {"arena": n_q * n_s, "cap": config_cap},
        )

    def successor(q, s, ii, bi):
        s2 = t2.delta[s][bi]
        o = t2.outputs[s2]
        q2 = rel.delta[q, (sigma_i.symbols[ii], o)]
        return q2, s2

    zetas = list(itertools.product(range(len(sigma_b)), repeat=len(sigma_i)))
    alive = {
        (q, s) for q in rel.accepting for s in range(n_s)
    }
    changed = True
    while changed:
        changed = False
        for node in sorted(alive):
            q, s = node
            if not any(
                all(successor(q, s, ii, zeta[ii]) in alive for ii in range(len(sigma_i)))
                for zeta in zetas
            ):
                alive.discard(node)
                changed = True
    root = (rel.initial, t2.initial)
    root_zeta = next(
        (
            zeta
            for zeta in zetas
            if all(successor(*root, ii, zeta[ii]) in alive for ii in range(len(sigma_i)))
        ),
        None,
    )
    stats = {"arena_states": n_q * n_s, "alive": len(alive)}
    if root_zeta is None:
        return None, stats

    strategy = {}
    for node in sorted(alive):
        q, s = node
        strategy[node] = next(
            zeta
            for zeta in zetas
            if all(successor(q, s, ii, zeta[ii]) in alive for ii in range(len(sigma_i)))
        )

    # States of t1 are (relation state, t2 state, emitted mid letter).
    index: dict = {}
    order: list = []

    def visit(key):
        if key not in index:
            index[key] = len(order)
            order.append(key)
        return index[key]

    root_key = (root[0], root[1], None)
    visit(root_key)
    delta_rows = {}
    queue = deque([root_key])
    while queue:
        key = queue.popleft()
        if key in delta_rows:
            continue
        q, s, _b = key
        zeta = root_zeta if key == root_key else strategy[q, s]
        row = []
        for ii in range(len(sigma_i)):
            bi = zeta[ii]
            q2, s2 = successor(q, s, ii, bi)
            nxt = (q2, s2, bi)
            row.append(visit(nxt))
            queue.append(nxt)
        delta_rows[key] = tuple(row)
    outputs = tuple(
        sigma_b.symbols[key[2]] if key[2] is not None else sigma_b.symbols[0]
        for key in order
    )
    t1 = MooreTransducer(
        sigma_i, sigma_b, len(order), 0,
        tuple(delta_rows[key] for key in order), outputs,
    )
    return t1, stats


# -- public operations -----------------------------------------------------------------


def solve_strategic(inst: AutomaticInstance, config_cap: int = 200_000) -> StrategicResult:
    """Synthesize both strategies, or report that none exist.

    Feasibility is decided by the phase-1 game alone; whenever it is won,
    the extracted t2 is guaranteed to leave the phase-2 game winnable.
    """
    t2, stats1 = _phase1(inst, config_cap)
    if t2 is None:
        return StrategicResult(False, None, {"phase1": stats1})
    t1, stats2 = _phase2(inst, t2, config_cap)
    if t1 is None:  # pragma: no cover - phase 1 victory carries a valid t1
        raise AssertionError("phase 2 unwinnable despite a phase 1 win")
    return StrategicResult(
        True, StrategicWitness(t1, t2), {"phase1": stats1, "phase2": stats2}
    )


def _eta_moves_hinted(rel: Dfa, t1: MooreTransducer, sigma_i: Domain, sigma_o: Domain):
    """Per-copy vectors when t1 fixes the mid letter for every input.

    Copies carry the t1 state; the synthesizer only guesses output letters,
    and each input letter is routed to the direction t1 emits for it.
    """
    n_b = len(t1.output_domain)

    def moves(copy):
        q, p = copy[0], copy[1]
        seen: dict = {}
        order: list = []
        for assignment in itertools.product(
            range(len(sigma_o)), repeat=len(sigma_i)
        ):
            groups = [set() for _ in range(n_b)]
            for ii, oi in enumerate(assignment):
                p2 = t1.delta[p][ii]
                bi = t1.output_domain.index(t1.outputs[p2])
                q2 = rel.delta[q, (sigma_i.symbols[ii], sigma_o.symbols[oi])]
                groups[bi].add((q2, p2, oi))
            vector = tuple(frozenset(g) for g in groups)
            if vector not in seen:
                seen[vector] = assignment
                order.append((assignment, vector))
        return order

    return moves


def solve_strategic_hint(
    inst: AutomaticInstance, hint: MooreTransducer, side: str,
    config_cap: int = 200_000,
) -> StrategicResult:
    """Synthesis with one strategy pinned by the caller.

    A pinned t1 restricts the phase-1 game's moves to t1's routing; a pinned
    t2 skips phase 1 entirely and runs the polynomial phase-2 game.
    """
    if side == T2_GIVEN:
        if hint.input_domain.symbols != inst.sigma_b.symbols:
            raise DomainMismatchError("t2 hint must read the intermediate alphabet")
        if hint.output_domain.symbols != inst.sigma_o.symbols:
            raise DomainMismatchError("t2 hint must write the output alphabet")
        t1, stats = _phase2(inst, hint, config_cap)
        if t1 is None:
            return StrategicResult(False, None, {"phase2": stats})
        return StrategicResult(True, StrategicWitness(t1, hint), {"phase2": stats})
    if side != T1_GIVEN:
        raise ValidationError(f"side must be {T1_GIVEN!r} or {T2_GIVEN!r}")
    if hint.input_domain.symbols != inst.sigma_i.symbols:
        raise DomainMismatchError("t1 hint must read the input alphabet")
    if hint.output_domain.symbols != inst.sigma_b.symbols:
        raise DomainMismatchError("t1 hint must write the intermediate alphabet")

    rel = inst.relation
    moves = _eta_moves_hinted(rel, hint, inst.sigma_i, inst.sigma_o)
    root_copy = (rel.initial, hint.initial, None)
    root_moves = moves(root_copy)
    dead_rel = _dead_predicate(rel)

    def is_dead(config):
        plain = frozenset((q, oi) for q, _p, oi in config)
        return dead_rel(plain)

    game = _SubsetGame(
        len(inst.sigma_b), root_moves, moves, is_dead, config_cap
    )
    winning, reachable = game.solve()
    best_root = game.best_move(root_moves, winning)
    stats = {"configs": reachable, "winning": len(winning)}
    if best_root is None:
        return StrategicResult(False, None, {"phase1": stats})
    t2 = _extract_t2_hinted(game, best_root, winning, inst)
    return StrategicResult(
        True, StrategicWitness(hint, t2), {"phase1": stats}
    )


def _extract_t2_hinted(game, root_key_vector, winning, inst) -> MooreTransducer:
    sigma_b, sigma_o = inst.sigma_b, inst.sigma_o
    _root_key, root_vector = root_key_vector
    index: dict = {}
    order: list = []
    delta_rows: list = []

    def visit(cfg) -> int:
        if cfg not in index:
            index[cfg] = len(order)
            order.append(cfg)
            delta_rows.append(None)
        return index[cfg]

    root_id = visit(frozenset({("root",)}))
    queue = deque()
    targets = []
    for cfg in root_vector:
        targets.append(visit(cfg))
        queue.append(cfg)
    delta_rows[root_id] = tuple(targets)
    resolved = {root_id}
    while queue:
        cfg = queue.popleft()
        cid = index[cfg]
        if cid in resolved:
            continue
        resolved.add(cid)
        if not cfg:
            delta_rows[cid] = tuple(cid for _ in sigma_b.symbols)
            continue
        found = game.best_joint_move(cfg, winning)
        if found is None:  # pragma: no cover
            raise AssertionError("winning configuration lost its move")
        _keys, vector = found
        row = []
        for nxt in vector:
            row.append(visit(nxt))
            queue.append(nxt)
        delta_rows[cid] = tuple(row)
    outputs = []
    for cfg in order:
        pending = {oi for item in cfg if item != ("root",) for oi in [item[-1]]}
        outputs.append(
            sigma_o.symbols[next(iter(pending))] if len(pending) == 1
            else sigma_o.symbols[0]
        )
    return MooreTransducer(
        sigma_b, sigma_o, len(order), root_id, tuple(delta_rows), tuple(outputs)
    )


@dataclass(frozen=True)
class BoundedVerification:
    ok: bool
    violation: Optional[Word] = None

    def __bool__(self):
        return self.ok


def verify_witness_bounded(
    inst: AutomaticInstance, witness: StrategicWitness, n: int
) -> BoundedVerification:
    """Check every input word up to length n against the relation automaton.

    Words are tried shortest first in lexicographic order, so a reported
    violation is canonical.
    """
    if n < 1:
        raise ValidationError("n must be at least 1")
    rel = inst.relation
    for length in range(1, n + 1):
        for word in itertools.product(inst.sigma_i.symbols, repeat=length):
            mids = transduce(witness.t1, word)
            outs = transduce(witness.t2, mids)
            paired = tuple(zip(word, outs))
            if not accepts(rel, paired):
                return BoundedVerification(False, tuple((l,) for l in word))
    return BoundedVerification(True)
