"""
Unit tests for one_firm.py.
"""
import json
from fractions import Fraction

import pytest

from app.errors import MultiFirm, NoFeasibleAssignment
from app.market import parse_instance
from app.one_firm import solve_one_firm
from app.stability import brute_force_efficient, check_r_stable, check_stable, total_match_value


def test_first_best_set_wins_ties(fixture_instance):
    """
    Tests the choice between {w2} and {w1, w3}, both worth 2.

    Why: Ties go to the first set in canonical order so results are reproducible.
    """
    inst = fixture_instance("example1-substitutes")
    arr = solve_one_firm(inst)

    assert arr.assignment.matched_set("f") == frozenset({"w2"})
    assert arr.salary("w2", "f") == Fraction(1, 2)
    assert arr.salary("w1", "f") == Fraction(-1, 2)
    assert check_stable(inst, arr).stable


def test_stable_without_integral_lp(fixture_instance):
    inst = fixture_instance("appB1-nonintegral")
    arr = solve_one_firm(inst)

    assert arr.assignment.matched_set("f") == frozenset({"w1"})
    assert check_stable(inst, arr).stable
    assert total_match_value(inst, arr.assignment) == brute_force_efficient(inst).value


def test_general_valuation():
    """
    Tests a subset-valued firm.

    Why: The direct construction needs no linear structure.
    """
    doc = {
        "version": 1, "mode": "general", "workers": ["w1", "w2"], "firms": ["f"],
        "worker_values": {"w1": {"f": "0"}, "w2": {"f": "-1"}},
        "firm_values": {"f": [{"set": ["w1"], "value": "1"}, {"set": ["w2"], "value": "2"},
                              {"set": ["w1", "w2"], "value": "2.5"}]},
    }
    inst = parse_instance(json.dumps(doc))
    arr = solve_one_firm(inst)

    assert arr.assignment.matched_set("f") == frozenset({"w1", "w2"})
    assert check_stable(inst, arr).stable


def test_r_mode_hires_the_mandatory_worker(fixture_instance):
    inst = fixture_instance("appB3-ir-odds")

    assert solve_one_firm(inst).assignment.matched_set("f") == frozenset()
    forced = solve_one_firm(inst, r_mode=True)
    assert forced.assignment.matched_set("f") == frozenset({"w"})
    assert check_r_stable(inst, forced).stable


def test_refusals(fixture_instance, make_instance):
    with pytest.raises(MultiFirm):
        solve_one_firm(fixture_instance("prop1-nonexistence"))
    impossible = make_instance({"f": {"w1": "1", "w2": "1"}},
                               {"f": [(["w1", "w2"], 2, 2), (["w1"], 0, 0)]})
    with pytest.raises(NoFeasibleAssignment):
        solve_one_firm(impossible, r_mode=True)
