"""The internal satisfiability core, validated against truth-table search."""

import itertools
import random

import pytest

from seqdec.errors import CapExceededError
from seqdec.sat import CnfSolver, solve_cnf


def truth_table_sat(n, clauses):
    """Exhaustive model search; None when unsatisfiable."""
    for bits in itertools.product([False, True], repeat=n):
        model = (False,) + bits
        if all(any(model[abs(l)] == (l > 0) for l in cl) for cl in clauses):
            return model
    return None


def check_model(model, clauses):
    assert all(any(model[abs(l)] == (l > 0) for l in cl) for cl in clauses)


def test_empty_formula_is_sat():
    assert solve_cnf(3, []) is not None


def test_empty_clause_is_unsat():
    assert solve_cnf(2, [[1], []]) is None


def test_unit_contradiction():
    assert solve_cnf(1, [[1], [-1]]) is None


def test_simple_implication_chain():
    model = solve_cnf(3, [[1], [-1, 2], [-2, 3]])
    assert model is not None
    assert model[1] and model[2] and model[3]


def test_classic_unsat_pigeonhole_2_into_1():
    # Two pigeons, one hole: x1 and x2 both forced, but mutually exclusive.
    assert solve_cnf(2, [[1], [2], [-1, -2]]) is None


def test_polarity_is_false_first():
    model = solve_cnf(2, [[1, 2]])
    # Lowest variable decided false first, clause satisfied via variable 2.
    assert model[1] is False and model[2] is True


def test_random_formulas_agree_with_truth_table():
    rng = random.Random(42)
    for round_ in range(400):
        n = rng.randint(1, 8)
        m = rng.randint(1, 4 * n)
        clauses = []
        for _ in range(m):
            width = rng.randint(1, min(3, n))
            vs = rng.sample(range(1, n + 1), width)
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
        expect = truth_table_sat(n, clauses)
        model = solve_cnf(n, clauses)
        if expect is None:
            assert model is None, f"round {round_}: solver SAT on UNSAT formula"
        else:
            assert model is not None, f"round {round_}: solver UNSAT on SAT formula"
            check_model(model, clauses)


def test_conflict_cap_raises():
    # Unit-free and unsatisfiable: refutation needs actual search conflicts.
    clauses = [list(signs) for signs in itertools.product(*[(v, -v) for v in (1, 2, 3)])]
    assert truth_table_sat(3, clauses) is None
    with pytest.raises(CapExceededError):
        CnfSolver(3, clauses, max_conflicts=0).solve()


def test_stats_reported():
    solver = CnfSolver(3, [[1, 2, 3], [-1, -2], [-2, -3], [-1, -3]])
    assert solver.solve() is not None
    stats = solver.stats()
    assert set(stats) == {"conflicts", "decisions"}
