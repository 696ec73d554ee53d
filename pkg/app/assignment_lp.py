"""
Assignment linear programs for linear-preference markets.

Builds the total-match-value LP with worker rows and the firms' quota rows,
reads an assignment off an optimal vertex, and turns the optimal duals into
payoffs and supporting salaries.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
from typing import Dict, Hashable, Iterator, List, Mapping, Optional, Tuple, Union

from .errors import LowerBoundPresent, MismatchError, ModeError, NoFeasibleAssignment
from .market import (Arrangement, Assignment, MarketInstance, PayoffVector, PreferenceMode,
                     coalition_value, match_value)
from .rational_lp import (DEFAULT_MAX_FRACTIONAL, LpProblem, LpRow, LpSolution, LpStatus,
                          Relation, integral_vertex_search, require_optimal, solve_lp)

logger = logging.getLogger(__name__)


class RowKind(Enum):
    """Role of an assignment-LP row."""
    WORKER_ALLOCATION = "alloc"
    UPPER_QUOTA = "ub"
    LOWER_QUOTA = "lb"


RowKey = Tuple[RowKind, Hashable]


@dataclass(frozen=True)
class LpArtifacts:
    """An assignment LP plus the maps from market objects to rows and columns."""
    problem: LpProblem
    row_index: Mapping[RowKey, int]
    var_index: Mapping[Tuple[str, str], int]
    workers: Tuple[str, ...]
    firms: Tuple[str, ...]

    def row_label(self, index: int) -> str:
        return self.problem.row_label(index)


@dataclass(frozen=True)
class FractionalReport:
    """Coordinates of an optimal vertex that are not 0 or 1."""
    coordinates: Tuple[Tuple[str, str, Fraction], ...]
    objective_value: Fraction


RowSpec = Tuple[RowKey, List[int], Relation, int, str]


def _quota_label(kind: RowKind, inst: MarketInstance, firm: str, subset) -> str:
    return f"{kind.value}[{firm}:{','.join(inst.ordered(subset))}]"


def _quota_rows(inst: MarketInstance, var_index: Mapping[Tuple[str, str], int],
                kind: RowKind) -> Iterator[RowSpec]:
    lower = kind is RowKind.LOWER_QUOTA
    for f in inst.firms:
        for entry in inst.family(f):
            if lower and entry.lower == 0:
                continue
            columns = [var_index[(w, f)] for w in inst.ordered(entry.subset)]
            yield ((kind, (f, entry.subset)), columns,
                   Relation.GE if lower else Relation.LE,
                   entry.lower if lower else entry.upper,
                   _quota_label(kind, inst, f, entry.subset))


def _build(inst: MarketInstance, with_lower: bool) -> LpArtifacts:
    if inst.preference_mode is not PreferenceMode.LINEAR:
        raise ModeError("assignment LPs need linear preferences")
    pairs = [(w, f) for w in inst.workers for f in inst.firms]
    var_index = {pair: j for j, pair in enumerate(pairs)}
    specs: List[RowSpec] = [
        ((RowKind.WORKER_ALLOCATION, w), [var_index[(w, f)] for f in inst.firms],
         Relation.LE, 1, f"alloc[{w}]")
        for w in inst.workers]
    specs.extend(_quota_rows(inst, var_index, RowKind.UPPER_QUOTA))
    if with_lower:
        specs.extend(_quota_rows(inst, var_index, RowKind.LOWER_QUOTA))
    rows: List[LpRow] = []
    row_index: Dict[RowKey, int] = {}
    for key, columns, relation, rhs, label in specs:
        marked = set(columns)
        coefficients = tuple(Fraction(1 if j in marked else 0) for j in range(len(pairs)))
        row_index[key] = len(rows)
        rows.append(LpRow(coefficients, relation, Fraction(rhs), label))
    objective = tuple(match_value(inst, w, f) for w, f in pairs)
    labels = tuple(f"x[{w},{f}]" for w, f in pairs)
    problem = LpProblem(objective, tuple(rows), labels)
    return LpArtifacts(problem, row_index, var_index, inst.workers, inst.firms)


def build_ub_lp(inst: MarketInstance) -> LpArtifacts:
    """
    Builds the upper-quota assignment LP.

    Why:
        Maximising total match value subject to one firm per worker and
        each firm's upper quotas; with polymatroid quotas its optimum is
        integral and its duals support a stable arrangement.

    Args:
        inst: Linear-mode instance without lower quotas

    Returns:
        LpArtifacts: Columns x[w,f] worker-major; one alloc row per worker,
        one ub row per constraint entry

    Raises:
        ModeError: General-mode instance
        LowerBoundPresent: Some entry has a positive lower quota

    Example:
        >>> art = build_ub_lp(load_fixture("prop1-nonexistence").instance)
        >>> art.problem.num_variables, len(art.problem.rows)
        (6, 7)
    """
    if inst.preference_mode is not PreferenceMode.LINEAR:
        raise ModeError("assignment LPs need linear preferences")
    if any(inst.family(f).has_lower_bounds() for f in inst.firms):
        raise LowerBoundPresent("instance has lower quotas; use the lower-bound LP")
    return _build(inst, with_lower=False)


def build_lb_lp(inst: MarketInstance) -> LpArtifacts:
    """Upper-quota LP plus a >= row for every entry with a positive lower quota."""
    return _build(inst, with_lower=True)


def extract_assignment(art: LpArtifacts, sol: LpSolution, vertex_search: bool = True,
                       max_fractional: int = DEFAULT_MAX_FRACTIONAL
                       ) -> Union[Assignment, FractionalReport]:
    """
    Reads a 0/1 assignment off an optimal solution.

    Args:
        art: Artifacts the solution belongs to
        sol: OPTIMAL solution of art.problem
        vertex_search: Try the floor/ceiling search when the vertex is fractional
        max_fractional: Search bound passed to integral_vertex_search

    Returns:
        Assignment when some optimum is integral, else a FractionalReport of
        the original vertex

    Raises:
        StatusError: sol is not OPTIMAL
    """
    require_optimal(sol)
    primal = sol.primal
    if vertex_search and any(x.denominator != 1 for x in primal):
        found = integral_vertex_search(art.problem, sol, max_fractional)
        if found is not None:
            primal = found.primal
    odd = [(w, f, primal[j]) for (w, f), j in art.var_index.items() if primal[j] not in (0, 1)]
    if odd:
        return FractionalReport(tuple(odd), sol.objective_value)
    assigned: Dict[str, Optional[str]] = {w: None for w in art.workers}
    for (w, f), j in art.var_index.items():
        if primal[j] == 1:
            assigned[w] = f
    return Assignment(assigned)


def dual_to_payoffs(inst: MarketInstance, art: LpArtifacts, sol: LpSolution) -> PayoffVector:
    """
    Payoffs from optimal duals: u_w is the worker row dual, v_f sums the
    firm's quota duals weighted by their quotas.

    Raises:
        StatusError: sol is not OPTIMAL
    """
    require_optimal(sol)
    worker_payoffs = {w: sol.dual[art.row_index[(RowKind.WORKER_ALLOCATION, w)]]
                      for w in inst.workers}
    firm_payoffs = {f: Fraction(0) for f in inst.firms}
    for (kind, key), i in art.row_index.items():
        if kind is RowKind.WORKER_ALLOCATION:
            continue
        firm, subset = key
        family = inst.family(firm)
        quota = family.upper(subset) if kind is RowKind.UPPER_QUOTA else family.lower(subset)
        firm_payoffs[firm] += sol.dual[i] * quota
    return PayoffVector(worker_payoffs, firm_payoffs)


def unmatched_salary(inst: MarketInstance) -> Fraction:
    """Sentinel salary strictly below -a[w, f] for every pair."""
    return -inst.max_worker_value() - 1


def payoffs_to_salaries(inst: MarketInstance, X: Assignment, pv: PayoffVector) -> Arrangement:
    """
    Salaries realising a payoff vector on an assignment.

    Why:
        Matched pairs pay s = u - a so each worker receives exactly u; every
        other pair gets a sentinel low enough that no worker would take it,
        which leaves only the coalition inequalities to decide stability.

    Args:
        inst: Market instance
        X: Assignment the payoffs were derived for
        pv: Payoffs with zero for unmatched agents and coalition value for
            every matched firm

    Returns:
        Arrangement: X with a total salary matrix

    Raises:
        MismatchError: pv does not fit X

    Example:
        >>> arr = payoffs_to_salaries(inst, X, pv)   # one worker, u = 3/2, a = 1/2
        >>> arr.salary("w", "f")
        Fraction(1, 1)
    """
    for w in inst.workers:
        if X.firm_of(w) is None and pv.worker_payoffs[w] != 0:
            raise MismatchError(f"unmatched worker {w!r} has payoff {pv.worker_payoffs[w]}")
    for f in inst.firms:
        members = X.matched_set(f)
        if not members:
            if pv.firm_payoffs[f] != 0:
                raise MismatchError(f"unmatched firm {f!r} has payoff {pv.firm_payoffs[f]}")
            continue
        shared = sum((pv.worker_payoffs[w] for w in members), Fraction(0)) + pv.firm_payoffs[f]
        if shared != coalition_value(inst, f, members):
            raise MismatchError(f"payoffs of firm {f!r} and its workers do not add up "
                                f"to the coalition value")
    sentinel = unmatched_salary(inst)
    salaries = {
        f: {w: (pv.worker_payoffs[w] - inst.worker_values[(w, f)]) if X.firm_of(w) == f
            else sentinel
            for w in inst.workers}
        for f in inst.firms}
    return Arrangement(X, salaries)


@dataclass(frozen=True)
class PipelineResult:
    """Everything the LP route produces for one instance."""
    artifacts: LpArtifacts
    solution: LpSolution
    outcome: Union[Assignment, FractionalReport]
    payoffs: PayoffVector
    arrangement: Optional[Arrangement]

    @property
    def integral(self) -> bool:
        return isinstance(self.outcome, Assignment)


def solve_assignment_lp(inst: MarketInstance, r_mode: bool = False, vertex_search: bool = True,
                        max_fractional: int = DEFAULT_MAX_FRACTIONAL) -> PipelineResult:
    """
    Build, solve, extract, and price in one call.

    Args:
        inst: Linear-mode instance
        r_mode: Use the lower-bound LP (required when lower quotas exist)
        vertex_search: Enable the integral vertex search fallback
        max_fractional: Bound for the fallback

    Returns:
        PipelineResult: arrangement is None when the outcome is fractional

    Raises:
        ModeError, LowerBoundPresent: See build_ub_lp
        NoFeasibleAssignment: The LP is infeasible (contradictory lower quotas)
    """
    art = build_lb_lp(inst) if r_mode else build_ub_lp(inst)
    sol = solve_lp(art.problem)
    if sol.status is LpStatus.INFEASIBLE:
        raise NoFeasibleAssignment("no assignment satisfies every lower and upper quota")
    outcome = extract_assignment(art, sol, vertex_search, max_fractional)
    payoffs = dual_to_payoffs(inst, art, sol)
    arrangement = None
    if isinstance(outcome, Assignment):
        arrangement = payoffs_to_salaries(inst, outcome, payoffs)
    else:
        logger.warning("LP optimum is fractional in %d coordinates", len(outcome.coordinates))
    return PipelineResult(art, sol, outcome, payoffs, arrangement)
