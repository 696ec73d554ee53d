"""
Registry of worked market examples with their expected verdicts.

Each fixture pairs an instance document with expectations that are
re-evaluated against the live implementation; the `reproduce` command and
the regression tests both run them.
"""
from dataclasses import dataclass
from fractions import Fraction
import json
from typing import Any, Callable, Dict, Iterable, List, Tuple

from .assignment_lp import (FractionalReport, build_lb_lp, build_ub_lp, dual_to_payoffs,
                            extract_assignment, solve_assignment_lp)
from .constraints import (enumerate_feasible_sets, is_generalized_polymatroid, is_hierarchy,
                          is_polymatroid)
from .errors import LowerBoundPresent, UnknownFixture
from .market import (Arrangement, Assignment, MarketInstance, coalition_value, family_from_triples,
                     format_rational, match_value, parse_instance)
from .one_firm import solve_one_firm
from .rational_lp import check_complementary_slackness, check_integral, solve_lp
from .stability import (FirmIRViolated, brute_force_efficient, check_r_efficient,
                        check_r_stable, check_stable, check_substitutes_violation,
                        compute_payoffs, demand_correspondence, payoff_combination,
                        satisfies_budget_identity, stable_exists)

F = Fraction


@dataclass(frozen=True)
class Expectation:
    """One check: evaluate(instance) must equal expected."""
    description: str
    expected: Any
    evaluate: Callable[[MarketInstance], Any]


@dataclass(frozen=True)
class Fixture:
    """A named instance with a source note and its expectations."""
    name: str
    description: str
    instance: MarketInstance
    expectations: Tuple[Expectation, ...]


@dataclass(frozen=True)
class ExpectationResult:
    description: str
    passed: bool
    expected: Any
    observed: Any


# --- rendering helpers: expectations compare plain values ---

def _sets(inst: MarketInstance, sets: Iterable[Iterable[str]]) -> List[List[str]]:
    return [inst.ordered(s) for s in sets]


def _assignment(X: Assignment) -> Dict[str, Any]:
    return dict(X.assigned)


def _numbers(values: Iterable[Fraction]) -> List[str]:
    return [format_rational(v) for v in values]


def _salaries(inst: MarketInstance, firm: str, values: Iterable[Any]) -> Dict[str, Dict[str, Fraction]]:
    return {firm: {w: F(v) for w, v in zip(inst.workers, values)}}


def _arrangement(inst: MarketInstance, firm: str, values: Iterable[Any]) -> Arrangement:
    """All workers matched to the single firm at the given salaries."""
    return Arrangement(Assignment.from_sets(inst, {firm: inst.workers}),
                       _salaries(inst, firm, values))


def _payoff_list(pv) -> List[str]:
    return _numbers(list(pv.worker_payoffs.values()) + list(pv.firm_payoffs.values()))


def _failure_kind(verdict) -> str:
    return "stable" if verdict.stable else type(verdict.failure).__name__


def _raises(fn: Callable[[], Any], error: type) -> bool:
    try:
        fn()
    except error:
        return True
    return False


def _instance(doc: Dict[str, Any]) -> MarketInstance:
    return parse_instance(json.dumps(doc))


# --- fixtures ---

def _example1() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w1", "w2", "w3"], "firms": ["f"],
        "worker_values": {"w1": {"f": "-0.5"}, "w2": {"f": "-0.5"}, "w3": {"f": "-0.5"}},
        "firm_values": {"w1": {"f": "1.5"}, "w2": {"f": "2.5"}, "w3": {"f": "1.5"}},
        "constraints": {"f": [{"set": ["w1", "w2"], "upper": 1},
                              {"set": ["w2", "w3"], "upper": 1}]},
    })
    s = {"w1": F("0.5"), "w2": F(1), "w3": F("0.5")}
    s_prime = {"w1": F("1.1"), "w2": F(1), "w3": F("0.5")}
    expectations = (
        Expectation("feasible sets follow the two pairwise limits literally",
                    [[], ["w1"], ["w2"], ["w3"], ["w1", "w3"]],
                    lambda i: _sets(i, enumerate_feasible_sets(i, "f"))),
        Expectation("match value of (w1, f)", "1", lambda i: format_rational(match_value(i, "w1", "f"))),
        Expectation("coalition value of {w1, w3}", "2",
                    lambda i: format_rational(coalition_value(i, "f", {"w1", "w3"}))),
        Expectation("demand at s = (0.5, 1, 0.5)", [["w1", "w3"]],
                    lambda i: _sets(i, demand_correspondence(i, "f", s))),
        Expectation("demand at s' = (1.1, 1, 0.5)", [["w2"]],
                    lambda i: _sets(i, demand_correspondence(i, "f", s_prime))),
        Expectation("raising w1's salary violates substitutes, dropping w3", ["w1", "w3"],
                    lambda i: i.ordered(check_substitutes_violation(i, "f", s, s_prime, "w1").witness)),
        Expectation("constraints are not a polymatroid", False,
                    lambda i: is_polymatroid(i.family("f")).holds),
        Expectation("one-firm construction is stable anyway", "stable",
                    lambda i: _failure_kind(check_stable(i, solve_one_firm(i)))),
    )
    return Fixture("example1-substitutes",
                   "One firm, three workers, two overlapping pairwise limits: demand fails "
                   "substitutes yet a stable arrangement exists. The prose of the source lists "
                   "only {w2} and {w1, w3} as feasible; the limits also admit the empty set, "
                   "{w1} and {w3}.",
                   inst, expectations)


def _prop1() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w1", "w2", "w3"], "firms": ["f1", "f2"],
        "worker_values": {w: {"f1": "0", "f2": "0"} for w in ("w1", "w2", "w3")},
        "firm_values": {"w1": {"f1": "0.9", "f2": "0.8"}, "w2": {"f1": "1.1", "f2": "1"},
                        "w3": {"f1": "1", "f2": "1.1"}},
        "constraints": {"f1": [{"set": ["w1", "w2"], "upper": 1}, {"set": ["w2", "w3"], "upper": 1}],
                        "f2": [{"set": ["w2", "w3"], "upper": 1}, {"set": ["w1", "w3"], "upper": 1}]},
    })
    expectations = (
        Expectation("match value of (w2, f1)", "1.1",
                    lambda i: format_rational(match_value(i, "w2", "f1"))),
        Expectation("coalition value of f1 with {w1, w3}", "1.9",
                    lambda i: format_rational(coalition_value(i, "f1", {"w1", "w3"}))),
        Expectation("best total match value", "2.9",
                    lambda i: format_rational(brute_force_efficient(i).value)),
        Expectation("unique efficient assignment", [{"w1": "f1", "w2": "f2", "w3": "f1"}],
                    lambda i: [_assignment(X) for X in brute_force_efficient(i).assignments]),
        Expectation("no stable arrangement exists", False, lambda i: stable_exists(i).exists),
        Expectation("upper-quota LP has 6 columns and 7 rows", [6, 7],
                    lambda i: [build_ub_lp(i).problem.num_variables, len(build_ub_lp(i).problem.rows)]),
    )
    return Fixture("prop1-nonexistence",
                   "Two firms whose pairwise limits cross: the unique efficient assignment "
                   "cannot be supported by any salaries. Firm values carry the match values "
                   "and worker values are zero.",
                   inst, expectations)


def _example2() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w1", "w2", "w3", "w4"], "firms": ["f"],
        "worker_values": {w: {"f": "0"} for w in ("w1", "w2", "w3", "w4")},
        "firm_values": {"w1": {"f": "1.5"}, "w2": {"f": "1"}, "w3": {"f": "2"}, "w4": {"f": "0.5"}},
        "constraints": {"f": [{"set": ["w1", "w2", "w3", "w4"], "upper": 2},
                              {"set": ["w1", "w2"], "upper": 1},
                              {"set": ["w3", "w4"], "upper": 1}]},
    })
    crossing = family_from_triples([({"w1", "w2", "w3", "w4"}, 0, 2), ({"w1", "w2"}, 0, 1),
                                    ({"w2", "w3"}, 0, 1)])

    def pipeline(i: MarketInstance) -> List[Any]:
        result = solve_assignment_lp(i)
        arr = result.arrangement
        return [result.integral, _assignment(result.outcome),
                format_rational(result.solution.objective_value),
                _failure_kind(check_stable(i, arr))]

    expectations = (
        Expectation("nested limits form a hierarchy", True, lambda i: is_hierarchy(i.family("f")).holds),
        Expectation("and a polymatroid", True, lambda i: is_polymatroid(i.family("f")).holds),
        Expectation("replacing {w3, w4} by {w2, w3} breaks the hierarchy at that pair",
                    [["w1", "w2"], ["w2", "w3"]],
                    lambda i: _sets(i, is_hierarchy(crossing).witness)),
        Expectation("replacing {w3, w4} by {w2, w3} breaks the polymatroid", False,
                    lambda i: is_polymatroid(crossing).holds),
        Expectation("LP route: integral, hires w1 and w3, value 3.5, stable",
                    [True, {"w1": "f", "w2": None, "w3": "f", "w4": None}, "3.5", "stable"],
                    pipeline),
    )
    return Fixture("example2-hierarchy",
                   "One firm hiring at most two of four workers and at most one from each "
                   "pair: a hierarchy, hence a polymatroid, so the LP route yields a stable "
                   "arrangement.",
                   inst, expectations)


def _b1() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w1", "w2", "w3"], "firms": ["f"],
        "worker_values": {w: {"f": "0"} for w in ("w1", "w2", "w3")},
        "firm_values": {w: {"f": "1"} for w in ("w1", "w2", "w3")},
        "constraints": {"f": [{"set": ["w1", "w2"], "upper": 1}, {"set": ["w2", "w3"], "upper": 1},
                              {"set": ["w1", "w3"], "upper": 1}]},
    })

    def lp(i: MarketInstance) -> List[Any]:
        sol = solve_lp(build_ub_lp(i).problem)
        return [format_rational(sol.objective_value), _numbers(sol.primal), check_integral(sol)]

    def extracted(i: MarketInstance) -> str:
        art = build_ub_lp(i)
        return type(extract_assignment(art, solve_lp(art.problem))).__name__

    expectations = (
        Expectation("LP optimum 3/2 at the all-halves vertex", ["1.5", ["0.5", "0.5", "0.5"], False], lp),
        Expectation("no integral optimum, even after vertex search", FractionalReport.__name__,
                    extracted),
        Expectation("best integral assignment value", "1",
                    lambda i: format_rational(brute_force_efficient(i).value)),
        Expectation("three singleton maximisers", 3,
                    lambda i: len(brute_force_efficient(i).assignments)),
        Expectation("one-firm construction is stable", "stable",
                    lambda i: _failure_kind(check_stable(i, solve_one_firm(i)))),
    )
    return Fixture("appB1-nonintegral",
                   "Three pairwise at-most-one limits at a single firm: the LP relaxation is "
                   "fractional while only one worker can be hired.",
                   inst, expectations)


def _b2() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w"], "firms": ["f"],
        "worker_values": {"w": {"f": "0.5"}}, "firm_values": {"w": {"f": "1"}},
        "constraints": {"f": [{"set": ["w"], "upper": 2}]},
    })

    def duals(i: MarketInstance) -> List[Any]:
        art = build_ub_lp(i)
        sol = solve_lp(art.problem)
        pv = dual_to_payoffs(i, art, sol)
        return [format_rational(pv.worker_payoffs["w"]), format_rational(pv.firm_payoffs["f"]),
                check_complementary_slackness(art.problem, sol)]

    def payoffs_at(value: str) -> List[str]:
        def evaluate(i: MarketInstance) -> List[str]:
            pv = compute_payoffs(i, _arrangement(i, "f", [value]))
            return [format_rational(pv.worker_payoffs["w"]), format_rational(pv.firm_payoffs["f"])]
        return evaluate

    expectations = (
        Expectation("dual payoffs u = 3/2, v = 0 with slack quota row", ["1.5", "0", True], duals),
        Expectation("LP salary", "1",
                    lambda i: format_rational(solve_assignment_lp(i).arrangement.salary("w", "f"))),
        Expectation("salary 1/2 gives payoffs (1, 1/2)", ["1", "0.5"], payoffs_at("0.5")),
        Expectation("salary 1/2 is also stable", "stable",
                    lambda i: _failure_kind(check_stable(i, _arrangement(i, "f", ["0.5"])))),
        Expectation("salary -0.5 is stable", "stable",
                    lambda i: _failure_kind(check_stable(i, _arrangement(i, "f", ["-0.5"])))),
        Expectation("salary 2 leaves the firm below zero", FirmIRViolated.__name__,
                    lambda i: _failure_kind(check_stable(i, _arrangement(i, "f", ["2"])))),
    )
    return Fixture("appB2-nonunique",
                   "One worker and one firm with a slack quota: every salary between -0.5 "
                   "and 1 is stable, while the LP duals give the firm nothing.",
                   inst, expectations)


def _b3() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w"], "firms": ["f"],
        "worker_values": {"w": {"f": "0"}}, "firm_values": {"w": {"f": "-1"}},
        "constraints": {"f": [{"set": ["w"], "lower": 1, "upper": 1}]},
    })

    def lb_route(i: MarketInstance) -> List[Any]:
        result = solve_assignment_lp(i, r_mode=True)
        return [format_rational(result.payoffs.worker_payoffs["w"]),
                format_rational(result.payoffs.firm_payoffs["f"]),
                format_rational(result.arrangement.salary("w", "f"))]

    expectations = (
        Expectation("hiring the worker is the only feasible set", [["w"]],
                    lambda i: _sets(i, enumerate_feasible_sets(i, "f"))),
        Expectation("lower-bound LP adds one >= row", 1,
                    lambda i: sum(1 for row in build_lb_lp(i).problem.rows if row.label.startswith("lb["))),
        Expectation("lower-bound LP: u = 0, v = -1, salary 0", ["0", "-1", "0"], lb_route),
        Expectation("arrangement is r-stable", "stable",
                    lambda i: _failure_kind(check_r_stable(i, solve_assignment_lp(i, r_mode=True).arrangement))),
        Expectation("but not stable: the firm's payoff is negative", FirmIRViolated.__name__,
                    lambda i: _failure_kind(check_stable(i, solve_assignment_lp(i, r_mode=True).arrangement))),
        Expectation("and r-efficient", True,
                    lambda i: check_r_efficient(i, solve_assignment_lp(i, r_mode=True).arrangement.assignment)),
        Expectation("upper-quota LP refuses lower quotas", True,
                    lambda i: _raises(lambda: build_ub_lp(i), LowerBoundPresent)),
        Expectation("quotas form a generalized polymatroid", True,
                    lambda i: is_generalized_polymatroid(i.family("f")).holds),
    )
    return Fixture("appB3-ir-odds",
                   "A mandatory hire with negative match value: r-stable only through a "
                   "negative firm payoff.",
                   inst, expectations)


def _nonlattice() -> Fixture:
    inst = _instance({
        "version": 1, "mode": "linear", "workers": ["w1", "w2"], "firms": ["f"],
        "worker_values": {"w1": {"f": "0"}, "w2": {"f": "0"}},
        "firm_values": {"w1": {"f": "2.5"}, "w2": {"f": "0.5"}},
        "constraints": {"f": [{"set": ["w1", "w2"], "lower": 2, "upper": 2}]},
    })
    first, second = ["1", "1"], ["2.5", "0.5"]

    def combined(i: MarketInstance) -> List[Any]:
        pv1 = compute_payoffs(i, _arrangement(i, "f", first))
        pv2 = compute_payoffs(i, _arrangement(i, "f", second))
        mixed = payoff_combination(pv1, pv2, worker_max=True)
        X = _arrangement(i, "f", first).assignment
        return [_numbers(mixed.worker_payoffs.values()) + _numbers(mixed.firm_payoffs.values()),
                satisfies_budget_identity(i, X, pv1), satisfies_budget_identity(i, X, mixed)]

    def lb_lp(i: MarketInstance) -> List[Any]:
        sol = solve_lp(build_lb_lp(i).problem)
        return [format_rational(sol.objective_value), _numbers(sol.primal)]

    expectations = (
        Expectation("single exact quota is a generalized polymatroid", True,
                    lambda i: is_generalized_polymatroid(i.family("f")).holds),
        Expectation("lower-bound LP forces both hires", ["3", ["1", "1"]], lb_lp),
        Expectation("salaries (1, 1) are stable", "stable",
                    lambda i: _failure_kind(check_stable(i, _arrangement(i, "f", first)))),
        Expectation("salaries (1, 1) give u = (1, 1), v = 1", ["1", "1", "1"],
                    lambda i: _payoff_list(compute_payoffs(i, _arrangement(i, "f", first)))),
        Expectation("salaries (2.5, 0.5) are stable", "stable",
                    lambda i: _failure_kind(check_stable(i, _arrangement(i, "f", second)))),
        Expectation("max-worker/min-firm mix breaks the budget identity",
                    [["2.5", "1", "0"], True, False], combined),
    )
    return Fixture("app-nonlattice",
                   "Two workers the firm must hire together: stable payoffs do not form a "
                   "lattice.",
                   inst, expectations)


_REGISTRY: Dict[str, Callable[[], Fixture]] = {
    "example1-substitutes": _example1,
    "prop1-nonexistence": _prop1,
    "example2-hierarchy": _example2,
    "appB1-nonintegral": _b1,
    "appB2-nonunique": _b2,
    "appB3-ir-odds": _b3,
    "app-nonlattice": _nonlattice,
}

FIXTURE_NAMES: Tuple[str, ...] = tuple(_REGISTRY)


def load_fixture(name: str) -> Fixture:
    """
    Builds a registered fixture by name.

    Raises:
        UnknownFixture: Name not registered

    Example:
        >>> load_fixture("appB2-nonunique").instance.workers
        ('w',)
    """
    try:
        builder = _REGISTRY[name]
    except KeyError as exc:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from exc
    return builder()


def run_expectations(fixture: Fixture) -> List[ExpectationResult]:
    """Evaluates every expectation of a fixture; errors propagate."""
    results = []
    for expectation in fixture.expectations:
        observed = expectation.evaluate(fixture.instance)
        results.append(ExpectationResult(expectation.description, observed == expectation.expected,
                                         expectation.expected, observed))
    return results
