"""
Unit tests for rational_lp.py.
Tests the exact two-phase simplex, its duals and the certificate audits.
"""
from fractions import Fraction
import random

import pytest

from app.errors import DimensionMismatch, StatusError
from app.rational_lp import (LpProblem, LpRow, LpSolution, LpStatus, Relation, check_complementary_slackness,
                             check_dual_feasible, check_integral, check_primal_feasible,
                             dual_objective, format_problem, integral_vertex_search,
                             reduced_costs, solve_lp)
from tests.generators import infeasible_lp, random_feasible_lp, unbounded_lp
from tests.oracles import is_vertex

F = Fraction
LE, GE, EQ = Relation.LE, Relation.GE, Relation.EQ


def row(coefficients, relation, rhs, label=""):
    return LpRow(tuple(F(c) for c in coefficients), relation, F(rhs), label)


def problem(objective, rows, labels=()):
    return LpProblem(tuple(F(c) for c in objective), tuple(rows), tuple(labels))


@pytest.fixture
def triangle():
    """Three pairwise at-most-one rows over three unit-valued variables."""
    return problem([1, 1, 1], [row([1, 0, 0], LE, 1), row([0, 1, 0], LE, 1), row([0, 0, 1], LE, 1),
                               row([1, 1, 0], LE, 1), row([0, 1, 1], LE, 1), row([1, 0, 1], LE, 1)])


def test_simple_maximisation():
    """
    Tests a two-variable problem with a unique optimum.

    Why: Baseline for the objective value, primal point and duals.
    """
    p = problem([3, 2], [row([1, 1], LE, 4), row([1, 3], LE, 9), row([1, 0], LE, 3)])
    sol = solve_lp(p)

    assert sol.status is LpStatus.OPTIMAL
    assert sol.primal == (F(3), F(1))
    assert sol.objective_value == 11
    assert sol.dual == (F(2), F(0), F(1))
    assert dual_objective(p, sol) == 11


def test_triangle_vertex_is_fractional(triangle):
    """
    Tests the all-halves vertex of three pairwise limits.

    Why: The pairwise limits are not totally unimodular.
    """
    sol = solve_lp(triangle)

    assert sol.objective_value == F(3, 2)
    assert sol.primal == (F(1, 2), F(1, 2), F(1, 2))
    assert is_vertex(triangle, sol.primal)
    assert not is_vertex(triangle, (F(1, 4), F(1, 4), F(1, 4)))
    assert not check_integral(sol)
    assert integral_vertex_search(triangle, sol) is None


def test_infeasible_and_unbounded():
    infeasible = problem([1], [row([1], GE, 2), row([1], LE, 1)])
    unbounded = problem([1, 0], [row([0, 1], LE, 1)])

    assert solve_lp(infeasible).status is LpStatus.INFEASIBLE
    assert solve_lp(unbounded).status is LpStatus.UNBOUNDED
    with pytest.raises(StatusError):
        check_integral(solve_lp(infeasible))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_lp(problem([1, 1], [row([1], LE, 1)]))
    with pytest.raises(ValueError):
        problem([1], [row([1], LE, 1)], labels=("a", "b")).validate()


def test_greater_equal_row_dual_is_non_positive():
    """
    Tests the dual sign of a binding >= row.

    Why: Lower-quota rows price a forced hire through a non-positive dual.
    """
    sol = solve_lp(problem([-1], [row([1], GE, 3)]))

    assert sol.primal == (F(3),)
    assert sol.dual == (F(-1),)


def test_negative_right_hand_side_keeps_dual_sign():
    """
    Tests an equality row with negative right-hand side.

    Why: Such rows are flipped internally; the reported dual must refer to
    the row as written.
    """
    p = problem([-1], [row([-1], EQ, -2)])
    sol = solve_lp(p)

    assert sol.primal == (F(2),)
    assert sol.objective_value == -2
    assert sol.dual == (F(1),)
    assert dual_objective(p, sol) == -2


def test_redundant_equality_rows():
    p = problem([1, 1], [row([1, 1], EQ, 2), row([2, 2], EQ, 4), row([1, 0], LE, 2)])
    sol = solve_lp(p)

    assert sol.objective_value == 2
    assert check_primal_feasible(p, sol)
    assert check_dual_feasible(p, sol)
    assert dual_objective(p, sol) == 2


def test_audits_reject_a_bad_dual():
    p = problem([1], [row([1], LE, 1), row([1], LE, 2)])
    sol = solve_lp(p)
    bad = LpSolution(LpStatus.OPTIMAL, sol.primal, (F(0), F(1)), sol.objective_value)

    assert check_complementary_slackness(p, sol)
    assert not check_complementary_slackness(p, bad)
    assert reduced_costs(p, sol.dual) == [F(0)]


def test_vertex_search_finds_integral_companion():
    """
    Tests the floor/ceiling search on a fractional optimum of an integral problem.

    Why: Degenerate pivoting can stop on a fractional point even when an
    integral optimum exists; the search must recover it with the same duals.
    """
    p = problem([1, 1], [row([1, 1], LE, 1)])
    fractional = LpSolution(LpStatus.OPTIMAL, (F(1, 2), F(1, 2)), (F(1),), F(1))
    found = integral_vertex_search(p, fractional)

    assert found.vertex_search
    assert found.primal == (F(0), F(1))
    assert found.dual == (F(1),)
    assert integral_vertex_search(p, solve_lp(p)) is not None
    assert integral_vertex_search(p, fractional, max_fractional=1) is None


def test_format_problem_lists_every_row():
    p = problem([1, -2], [row([1, 1], LE, F(3, 2), "cap"), row([0, 1], GE, 0)], ["x", "y"])
    text = format_problem(p)

    assert text.splitlines()[0] == "maximize x - 2 y"
    assert "  cap: x + y <= 1.5" in text
    assert "  r1: y >= 0" in text


def test_random_problems_satisfy_strong_duality():
    """
    Tests exact soundness on 500 random feasible, bounded problems.

    Why: Every downstream certificate relies on primal feasibility, dual
    feasibility, equal objectives and complementary slackness holding with
    exact equality.
    """
    rng = random.Random(20261019)
    for case in range(500):
        p, point = random_feasible_lp(rng)
        sol = solve_lp(p)
        assert sol.status is LpStatus.OPTIMAL, case
        assert check_primal_feasible(p, sol), case
        assert check_dual_feasible(p, sol), case
        assert dual_objective(p, sol) == sol.objective_value, case
        assert check_complementary_slackness(p, sol), case
        assert is_vertex(p, sol.primal), case
        feasible_value = sum((c * x for c, x in zip(p.objective, point)), F(0))
        assert feasible_value <= dual_objective(p, sol), case


def test_random_infeasible_problems():
    rng = random.Random(20261020)
    for case in range(200):
        sol = solve_lp(infeasible_lp(rng))
        assert sol.status is LpStatus.INFEASIBLE, case
        assert sol.primal == () and sol.objective_value is None, case


def _allows(row, direction):
    drift = row.activity(direction)
    return {LE: drift <= 0, GE: drift >= 0, EQ: drift == 0}[row.relation]


def test_random_unbounded_problems():
    """
    Tests problems that admit an improving ray from a feasible point.

    Why: Phase two must stop on the ray instead of reporting a vertex.
    """
    rng = random.Random(20261021)
    for case in range(200):
        p, direction = unbounded_lp(rng)
        assert all(_allows(row, direction) for row in p.rows), case
        assert solve_lp(p).status is LpStatus.UNBOUNDED, case


def test_solver_is_deterministic(triangle):
    assert solve_lp(triangle) == solve_lp(triangle)
