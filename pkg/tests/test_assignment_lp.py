"""
Unit tests for assignment_lp.py.
Tests LP construction, assignment extraction and the dual-to-salary pipeline.
"""
import json
from fractions import Fraction

import pytest

from app.assignment_lp import (FractionalReport, RowKind, build_lb_lp, build_ub_lp,
                               dual_to_payoffs, extract_assignment, payoffs_to_salaries,
                               solve_assignment_lp, unmatched_salary)
from app.errors import LowerBoundPresent, MismatchError, ModeError, NoFeasibleAssignment, StatusError
from app.market import Assignment, PayoffVector, parse_instance
from app.rational_lp import LpSolution, LpStatus, check_complementary_slackness, solve_lp
from app.stability import check_r_stable, check_stable, compute_payoffs

F = Fraction


def test_ub_lp_layout(fixture_instance):
    """
    Tests columns, rows and labels of the upper-quota LP.

    Why: Row labels are part of the certificate and must stay stable.
    """
    art = build_ub_lp(fixture_instance("prop1-nonexistence"))
    problem = art.problem

    assert problem.num_variables == 6
    assert [problem.row_label(i) for i in range(len(problem.rows))] == [
        "alloc[w1]", "alloc[w2]", "alloc[w3]",
        "ub[f1:w1,w2]", "ub[f1:w2,w3]", "ub[f2:w2,w3]", "ub[f2:w1,w3]"]
    assert problem.variable_label(0) == "x[w1,f1]"
    assert problem.objective[art.var_index[("w2", "f1")]] == F(11, 10)
    assert art.row_index[(RowKind.WORKER_ALLOCATION, "w3")] == 2


def test_ub_lp_refuses_lower_quotas_and_general_mode(fixture_instance):
    with pytest.raises(LowerBoundPresent):
        build_ub_lp(fixture_instance("appB3-ir-odds"))
    general = {
        "version": 1, "mode": "general", "workers": ["w"], "firms": ["f"],
        "worker_values": {"w": {"f": "0"}}, "firm_values": {"f": [{"set": ["w"], "value": "1"}]},
    }
    with pytest.raises(ModeError):
        build_lb_lp(parse_instance(json.dumps(general)))


def test_lb_lp_adds_lower_rows(fixture_instance):
    art = build_lb_lp(fixture_instance("app-nonlattice"))
    labels = [art.problem.row_label(i) for i in range(len(art.problem.rows))]

    assert labels == ["alloc[w1]", "alloc[w2]", "ub[f:w1,w2]", "lb[f:w1,w2]"]


def test_hierarchy_pipeline_is_integral_and_stable(fixture_instance):
    """
    Tests the full LP route on nested limits.

    Why: With polymatroid quotas the optimum is integral and the duals
    support a stable arrangement.
    """
    inst = fixture_instance("example2-hierarchy")
    result = solve_assignment_lp(inst)

    assert result.integral
    assert result.outcome.matched_set("f") == frozenset({"w1", "w3"})
    assert result.solution.objective_value == F(7, 2)
    assert check_complementary_slackness(result.artifacts.problem, result.solution)
    assert check_stable(inst, result.arrangement).stable
    assert result.payoffs.total() == F(7, 2)


def test_single_pair_duals(fixture_instance):
    """
    Tests dual payoffs when the quota row is slack.

    Why: The worker row takes the whole match value; the firm gets zero.
    """
    inst = fixture_instance("appB2-nonunique")
    art = build_ub_lp(inst)
    sol = solve_lp(art.problem)
    pv = dual_to_payoffs(inst, art, sol)

    assert pv.worker_payoffs == {"w": F(3, 2)}
    assert pv.firm_payoffs == {"f": F(0)}
    arr = payoffs_to_salaries(inst, extract_assignment(art, sol), pv)
    assert arr.salary("w", "f") == 1


def test_lower_bound_route_prices_forced_hire(fixture_instance):
    inst = fixture_instance("appB3-ir-odds")
    result = solve_assignment_lp(inst, r_mode=True)

    assert result.payoffs.worker_payoffs["w"] == 0
    assert result.payoffs.firm_payoffs["f"] == -1
    assert check_r_stable(inst, result.arrangement).stable
    assert not check_stable(inst, result.arrangement).stable


def test_fractional_optimum_is_reported(fixture_instance):
    """
    Tests extraction on the all-halves vertex.

    Why: No assignment may be read off a fractional optimum.
    """
    inst = fixture_instance("appB1-nonintegral")
    result = solve_assignment_lp(inst)

    assert not result.integral
    assert isinstance(result.outcome, FractionalReport)
    assert result.arrangement is None
    assert result.outcome.objective_value == F(3, 2)
    assert [value for _, _, value in result.outcome.coordinates] == [F(1, 2)] * 3


def test_extract_requires_optimal_solution(fixture_instance):
    art = build_ub_lp(fixture_instance("appB2-nonunique"))
    with pytest.raises(StatusError):
        extract_assignment(art, LpSolution(LpStatus.INFEASIBLE))


def test_contradictory_lower_quotas(make_instance):
    inst = make_instance({"f": {"w1": "1", "w2": "1"}},
                         {"f": [(["w1", "w2"], 2, 2), (["w1"], 0, 0)]})
    with pytest.raises(NoFeasibleAssignment):
        solve_assignment_lp(inst, r_mode=True)


def test_unmatched_salary_sentinel(make_instance):
    inst = make_instance({"f": {"w1": "1", "w2": "1"}},
                         worker_values={("w1", "f"): "2.5", ("w2", "f"): "-1"})
    assert unmatched_salary(inst) == F(-7, 2)


def test_salaries_from_payoffs(make_instance):
    """
    Tests the salary matrix built from payoffs.

    Why: Matched pairs must pay exactly the payoff minus the worker's own
    value; all other pairs get the sentinel.
    """
    inst = make_instance({"f": {"w1": "1", "w2": "1"}, "g": {"w1": "0", "w2": "0"}},
                         worker_values={("w1", "f"): "0.5"})
    X = Assignment.from_sets(inst, {"f": ["w1"]})
    pv = PayoffVector({"w1": F(1), "w2": F(0)}, {"f": F(1, 2), "g": F(0)})
    arr = payoffs_to_salaries(inst, X, pv)

    assert arr.salary("w1", "f") == F(1, 2)
    assert arr.salary("w2", "f") == F(-3, 2)
    assert arr.salary("w1", "g") == F(-3, 2)
    assert compute_payoffs(inst, arr) == pv


@pytest.mark.parametrize("pv", [
    PayoffVector({"w1": F(1), "w2": F(1)}, {"f": F(1, 2), "g": F(0)}),
    PayoffVector({"w1": F(1), "w2": F(0)}, {"f": F(1, 2), "g": F(1)}),
    PayoffVector({"w1": F(1), "w2": F(0)}, {"f": F(1), "g": F(0)}),
])
def test_salaries_reject_inconsistent_payoffs(make_instance, pv):
    inst = make_instance({"f": {"w1": "1", "w2": "1"}, "g": {"w1": "0", "w2": "0"}},
                         worker_values={("w1", "f"): "0.5"})
    X = Assignment.from_sets(inst, {"f": ["w1"]})
    with pytest.raises(MismatchError):
        payoffs_to_salaries(inst, X, pv)
