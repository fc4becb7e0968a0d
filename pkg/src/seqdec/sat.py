"""Internal satisfiability core: conflict-driven search with unit propagation.

Deliberately heuristic-free so that models are reproducible: decisions pick
the lowest-index unassigned variable and try false first.  Clause learning
uses first-UIP resolution with backjumping.  DIMACS conventions throughout:
variables are 1-based, a literal is a signed variable index.
"""

from __future__ import annotations

from .errors import CapExceededError


class CnfSolver:
    """One-shot solver for a CNF given as a list of integer clauses."""

    def __init__(self, var_count: int, clauses, max_conflicts: int = 1_000_000):
        self.n = var_count
        self.max_conflicts = max_conflicts
        self.clauses: list[list[int]] = []
        self.assign = [0] * (var_count + 1)  # 0 unassigned, +1 true, -1 false
        self.level = [0] * (var_count + 1)
        self.reason = [-1] * (var_count + 1)  # clause index that implied the var
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.watches: dict[int, list[int]] = {}
        self.qhead = 0
        self.conflicts = 0
        self.decisions = 0
        self.ok = True
        for clause in clauses:
            self._add_clause(list(clause))

    # -- construction -------------------------------------------------

    def _add_clause(self, lits: list[int]) -> None:
        lits = sorted(set(lits), key=abs)
        if any(-l in lits for l in lits):
            return  # tautology
        for l in lits:
            if not (1 <= abs(l) <= self.n):
                raise ValueError(f"literal {l} out of range for {self.n} variables")
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            if not self._enqueue(lits[0], -1):
                self.ok = False
            return
        idx = len(self.clauses)
        self.clauses.append(lits)
        self.watches.setdefault(lits[0], []).append(idx)
        self.watches.setdefault(lits[1], []).append(idx)

    # -- assignment machinery ------------------------------------------

    def _value(self, lit: int) -> int:
        v = self.assign[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int) -> bool:
        val = self._value(lit)
        if val == 1:
            return True
        if val == -1:
            return False
        var = abs(lit)
        self.assign[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    def _propagate(self) -> int:
        """Exhaust unit propagation; return a conflicting clause index or -1."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            falsified = -lit
            watch_list = self.watches.get(falsified, [])
            kept = []
            i = 0
            while i < len(watch_list):
                ci = watch_list[i]
                i += 1
                clause = self.clauses[ci]
                # Normalize so the falsified literal sits at position 1.
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if self._value(other) == 1:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self._value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if not self._enqueue(other, ci):
                    kept.extend(watch_list[i:])
                    self.watches[falsified] = kept
                    return ci
            self.watches[falsified] = kept
        return -1

    # -- conflict analysis ---------------------------------------------

    def _analyze(self, conflict: int) -> tuple[list[int], int]:
        """First-UIP learned clause and the level to backjump to."""
        learnt = [0]  # placeholder for the asserting literal
        seen = [False] * (self.n + 1)
        counter = 0
        lit = 0
        idx = len(self.trail) - 1
        clause = self.clauses[conflict]
        cur_level = len(self.trail_lim)
        while True:
            for q in clause:
                if lit != 0 and q == lit:
                    continue  # the literal this clause implied, not an antecedent
                var = abs(q)
                if seen[var] or self.level[var] == 0:
                    continue
                seen[var] = True
                if self.level[var] == cur_level:
                    counter += 1
                else:
                    learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            lit = self.trail[idx]
            idx -= 1
            seen[abs(lit)] = False
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[abs(lit)]]
        learnt[0] = -lit
        if len(learnt) == 1:
            return learnt, 0
        back = max(self.level[abs(q)] for q in learnt[1:])
        return learnt, back

    def _backjump(self, target_level: int) -> None:
        while len(self.trail_lim) > target_level:
            bound = self.trail_lim.pop()
            while len(self.trail) > bound:
                var = abs(self.trail.pop())
                self.assign[var] = 0
                self.reason[var] = -1
        self.qhead = len(self.trail)

    # -- main loop -------------------------------------------------------

    def solve(self) -> list[bool] | None:
        """Return a model as a bool list indexed 1..n, or None if UNSAT."""
        if not self.ok:
            return None
        if self._propagate() != -1:
            return None
        while True:
            conflict = self._propagate()
            if conflict != -1:
                self.conflicts += 1
                if self.conflicts > self.max_conflicts:
                    raise CapExceededError(
                        "satisfiability search exceeded the conflict cap",
                        self.stats(),
                    )
                if not self.trail_lim:
                    return None
                learnt, back = self._analyze(conflict)
                self._backjump(back)
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], -1):
                        return None
                else:
                    idx = len(self.clauses)
                    # Position 1 must watch a literal from the backjump level.
                    for k in range(2, len(learnt)):
                        if self.level[abs(learnt[k])] > self.level[abs(learnt[1])]:
                            learnt[1], learnt[k] = learnt[k], learnt[1]
                    self.clauses.append(learnt)
                    self.watches.setdefault(learnt[0], []).append(idx)
                    self.watches.setdefault(learnt[1], []).append(idx)
                    self._enqueue(learnt[0], idx)
                continue
            var = next((v for v in range(1, self.n + 1) if self.assign[v] == 0), 0)
            if var == 0:
                return [False] + [self.assign[v] == 1 for v in range(1, self.n + 1)]
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(-var, -1)  # false-first polarity

    def stats(self) -> dict:
        return {"conflicts": self.conflicts, "decisions": self.decisions}


def solve_cnf(var_count: int, clauses, max_conflicts: int = 1_000_000):
    """Convenience wrapper: model as bool list (index 0 unused) or None."""
    return CnfSolver(var_count, clauses, max_conflicts).solve()
