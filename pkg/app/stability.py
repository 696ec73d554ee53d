"""
Stability, efficiency and demand checks for arrangements.

Every checker quantifies over explicitly enumerated feasible sets; caps on
the enumerations are passed in by the caller (see app.config).
"""
from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .assignment_lp import payoffs_to_salaries
from .constraints import DEFAULT_ENUM_CAP, enumerate_feasible_sets, is_feasible_set
from .errors import CapExceeded, NoFeasibleAssignment, PreconditionError
from .market import (Arrangement, Assignment, MarketInstance, PayoffVector, WorkerSet,
                     coalition_value, firm_set_value)
from .rational_lp import LpProblem, LpRow, Relation, solve_lp

logger = logging.getLogger(__name__)

DEFAULT_ASSIGN_CAP = 10 ** 7
ZERO = Fraction(0)


# --- verdict types ---

@dataclass(frozen=True)
class NotFeasible:
    """A firm's matched set breaks its constraints."""
    firm: str
    detail: str


@dataclass(frozen=True)
class WorkerIRViolated:
    worker: str
    payoff: Fraction


@dataclass(frozen=True)
class FirmIRViolated:
    firm: str
    payoff: Fraction


@dataclass(frozen=True)
class BlockingCoalition:
    """A firm and feasible worker set whose coalition value exceeds their payoffs."""
    firm: str
    workers: WorkerSet
    deficit: Fraction


Failure = Union[NotFeasible, WorkerIRViolated, FirmIRViolated, BlockingCoalition]


@dataclass(frozen=True)
class StabilityVerdict:
    """stable, or the first failure found."""
    stable: bool
    failure: Optional[Failure] = None


@dataclass(frozen=True)
class EfficiencyResult:
    """Best total match value and every assignment reaching it, canonical order."""
    value: Fraction
    assignments: Tuple[Assignment, ...]
    r_mode: bool = False


@dataclass(frozen=True)
class ExistenceVerdict:
    """Outcome of the stable-arrangement search."""
    exists: bool
    witness: Optional[Arrangement] = None
    obstruction: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SubstitutesVerdict:
    """Result of one substitutes test for a salary raise."""
    violated: bool
    witness: Optional[WorkerSet]
    demand_before: Tuple[WorkerSet, ...]
    demand_after: Tuple[WorkerSet, ...]


# --- payoffs ---

def compute_payoffs(inst: MarketInstance, arr: Arrangement) -> PayoffVector:
    """
    Payoffs of every agent under an arrangement.

    Args:
        inst: Market instance
        arr: Assignment with total salaries

    Returns:
        PayoffVector: u_w = a[w, f] + s[w, f] for the worker's firm (0 when
        unmatched); v_f = b[D_f, f] minus the salaries of D_f (0 when D_f is
        empty)

    Raises:
        UnknownSetError: General mode, matched set missing from the table

    Example:
        >>> compute_payoffs(inst, arr).firm_payoffs["f"]   # one worker, s = 1/2
        Fraction(1, 2)
    """
    assignment = arr.assignment
    worker_payoffs: Dict[str, Fraction] = {}
    for w in inst.workers:
        f = assignment.firm_of(w)
        worker_payoffs[w] = ZERO if f is None else inst.worker_values[(w, f)] + arr.salary(w, f)
    firm_payoffs: Dict[str, Fraction] = {}
    for f in inst.firms:
        members = assignment.matched_set(f)
        paid = sum((arr.salary(w, f) for w in members), ZERO)
        firm_payoffs[f] = firm_set_value(inst, f, members) - paid if members else ZERO
    return PayoffVector(worker_payoffs, firm_payoffs)


def total_match_value(inst: MarketInstance, X: Assignment) -> Fraction:
    """Sum of coalition values of the matched firms."""
    return sum((coalition_value(inst, f, X.matched_set(f)) for f in inst.firms
                if X.matched_set(f)), ZERO)


def satisfies_budget_identity(inst: MarketInstance, X: Assignment, pv: PayoffVector) -> bool:
    """True iff total payoffs equal the total match value of X."""
    return pv.total() == total_match_value(inst, X)


def payoff_combination(pv1: PayoffVector, pv2: PayoffVector, worker_max: bool = True) -> PayoffVector:
    """
    Coordinatewise combination of two payoff vectors.

    worker_max=True takes the larger worker payoff and the smaller firm
    payoff in every coordinate; False does the opposite.
    """
    high, low = (max, min) if worker_max else (min, max)
    workers = {w: high(u, pv2.worker_payoffs[w]) for w, u in pv1.worker_payoffs.items()}
    firms = {f: low(v, pv2.firm_payoffs[f]) for f, v in pv1.firm_payoffs.items()}
    return PayoffVector(workers, firms)


# --- stability ---

def _feasibility_failure(inst: MarketInstance, X: Assignment, strict: bool) -> Optional[NotFeasible]:
    for f in inst.firms:
        members = X.matched_set(f)
        if not members and not strict:
            continue
        if not is_feasible_set(inst.family(f), members):
            return NotFeasible(f, f"matched set {inst.ordered(members)} breaks the quotas of {f}")
    return None


def _ir_failure(inst: MarketInstance, pv: PayoffVector, firms_too: bool) -> Optional[Failure]:
    for w in inst.workers:
        if pv.worker_payoffs[w] < 0:
            return WorkerIRViolated(w, pv.worker_payoffs[w])
    if firms_too:
        for f in inst.firms:
            if pv.firm_payoffs[f] < 0:
                return FirmIRViolated(f, pv.firm_payoffs[f])
    return None


def _blocking(inst: MarketInstance, pv: PayoffVector, cap: int) -> Optional[BlockingCoalition]:
    for f in inst.firms:
        for subset in enumerate_feasible_sets(inst, f, cap):
            shared = sum((pv.worker_payoffs[w] for w in subset), ZERO) + pv.firm_payoffs[f]
            deficit = coalition_value(inst, f, subset) - shared
            if deficit > 0:
                return BlockingCoalition(f, subset, deficit)
    return None


def _verdict(failure: Optional[Failure]) -> StabilityVerdict:
    return StabilityVerdict(failure is None, failure)


def check_stable(inst: MarketInstance, arr: Arrangement,
                 cap: int = DEFAULT_ENUM_CAP) -> StabilityVerdict:
    """
    Decides stability through feasibility, individual rationality and the
    coalition inequalities.

    Why:
        An arrangement is stable exactly when no firm and feasible worker
        set can share more than their current payoffs; salaries inside a
        coalition cancel, so only coalition values need comparing.

    Args:
        inst: Market instance
        arr: Arrangement to check
        cap: Enumeration cap for each firm's feasible sets

    Returns:
        StabilityVerdict: First failure in the order feasibility, worker IR,
        firm IR, blocking coalition (firms in file order, sets canonical)

    Raises:
        CapExceeded: Feasible-set enumeration over the cap

    Example:
        >>> check_stable(inst, arr).stable   # one worker, a = 1/2, c = 1, s = 1
        True
    """
    failure: Optional[Failure] = _feasibility_failure(inst, arr.assignment, strict=False)
    if failure is None:
        pv = compute_payoffs(inst, arr)
        failure = _ir_failure(inst, pv, firms_too=True) or _blocking(inst, pv, cap)
    return _verdict(failure)


def check_r_stable(inst: MarketInstance, arr: Arrangement,
                   cap: int = DEFAULT_ENUM_CAP) -> StabilityVerdict:
    """
    Stability relaxed for lower quotas: every matched set (empty included)
    must be feasible, firm IR is dropped, worker IR and the coalition
    inequalities over feasible sets remain.
    """
    failure: Optional[Failure] = _feasibility_failure(inst, arr.assignment, strict=True)
    if failure is None:
        pv = compute_payoffs(inst, arr)
        failure = _ir_failure(inst, pv, firms_too=False) or _blocking(inst, pv, cap)
    return _verdict(failure)


# --- efficiency ---

def _options(inst: MarketInstance, firm: str, r_mode: bool, cap: int) -> List[Tuple[int, WorkerSet, Fraction]]:
    """(mask, set, coalition value) for every set the firm may hold."""
    collection = enumerate_feasible_sets(inst, firm, cap)
    sets = list(collection)
    if not r_mode and frozenset() not in collection:
        sets.insert(0, frozenset())
    options = []
    for subset in sets:
        mask = 0
        for w in subset:
            mask |= 1 << inst.worker_index(w)
        options.append((mask, subset, coalition_value(inst, firm, subset)))
    return options


def _search(options: Sequence[List[Tuple[int, WorkerSet, Fraction]]]) -> Tuple[Optional[Fraction], List[Tuple[WorkerSet, ...]]]:
    """Exhaustive search over disjoint per-firm choices; returns best value and choices."""
    best: List[Optional[Fraction]] = [None]
    winners: List[Tuple[WorkerSet, ...]] = []
    chosen: List[WorkerSet] = []

    def descend(index: int, used: int, value: Fraction) -> None:
        if index == len(options):
            if best[0] is None or value > best[0]:
                best[0] = value
                winners.clear()
            if value == best[0]:
                winners.append(tuple(chosen))
            return
        for mask, subset, worth in options[index]:
            if mask & used:
                continue
            chosen.append(subset)
            descend(index + 1, used | mask, value + worth)
            chosen.pop()

    descend(0, 0, ZERO)
    return best[0], winners


def _canonical_rank(inst: MarketInstance, X: Assignment) -> Tuple[int, ...]:
    return tuple(0 if X.firm_of(w) is None else 1 + inst.firms.index(X.firm_of(w))
                 for w in inst.workers)


def brute_force_efficient(inst: MarketInstance, cap: int = DEFAULT_ASSIGN_CAP,
                          r_mode: bool = False,
                          enum_cap: int = DEFAULT_ENUM_CAP) -> EfficiencyResult:
    """
    Enumerates all feasible assignments and keeps the value maximisers.

    Args:
        inst: Market instance
        cap: Largest admissible (|F|+1)^|W|
        r_mode: Require every firm's matched set to be feasible, empty included
        enum_cap: Cap for each firm's feasible-set enumeration

    Returns:
        EfficiencyResult: Exact optimum and all maximisers, ordered by the
        per-worker choice (unmatched first, then firms in file order)

    Raises:
        CapExceeded: Assignment space over cap
        NoFeasibleAssignment: r_mode and no r-feasible assignment exists

    Example:
        >>> brute_force_efficient(load_fixture("prop1-nonexistence").instance).value
        Fraction(29, 10)
    """
    space = (len(inst.firms) + 1) ** len(inst.workers)
    if space > cap:
        logger.info("refusing to enumerate %d assignments (cap %d)", space, cap)
        raise CapExceeded(f"{space} assignments exceed assignment cap {cap}")
    options = [_options(inst, f, r_mode, enum_cap) for f in inst.firms]
    value, winners = _search(options)
    if value is None:
        raise NoFeasibleAssignment("no assignment satisfies every firm's constraints")
    assignments = [Assignment.from_sets(inst, dict(zip(inst.firms, choice))) for choice in winners]
    assignments.sort(key=lambda X: _canonical_rank(inst, X))
    logger.debug("efficient value %s reached by %d assignment(s)", value, len(assignments))
    return EfficiencyResult(value, tuple(assignments), r_mode)


def check_efficient(inst: MarketInstance, X: Assignment, cap: int = DEFAULT_ASSIGN_CAP,
                    enum_cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff X is feasible and reaches the brute-force optimum."""
    if _feasibility_failure(inst, X, strict=False) is not None:
        return False
    return total_match_value(inst, X) == brute_force_efficient(inst, cap, False, enum_cap).value


def check_r_efficient(inst: MarketInstance, X: Assignment, cap: int = DEFAULT_ASSIGN_CAP,
                      enum_cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True iff X is r-feasible and reaches the optimum over r-feasible assignments."""
    if _feasibility_failure(inst, X, strict=True) is not None:
        return False
    return total_match_value(inst, X) == brute_force_efficient(inst, cap, True, enum_cap).value


# --- existence ---

def _support_problem(inst: MarketInstance, X: Assignment, cap: int) -> LpProblem:
    """Zero-objective LP over (u, v) >= 0 pinned to X with all coalition rows."""
    labels = tuple(f"u[{w}]" for w in inst.workers) + tuple(f"v[{f}]" for f in inst.firms)
    n = len(labels)
    column = {w: i for i, w in enumerate(inst.workers)}
    firm_column = {f: len(inst.workers) + i for i, f in enumerate(inst.firms)}

    def row(workers, firm, relation: Relation, rhs: Fraction, label: str) -> LpRow:
        marked = {column[w] for w in workers}
        if firm is not None:
            marked.add(firm_column[firm])
        return LpRow(tuple(Fraction(1 if j in marked else 0) for j in range(n)),
                     relation, rhs, label)

    rows: List[LpRow] = []
    for w in inst.workers:
        if X.firm_of(w) is None:
            rows.append(row([w], None, Relation.EQ, ZERO, f"unmatched[{w}]"))
    for f in inst.firms:
        members = X.matched_set(f)
        value = coalition_value(inst, f, members) if members else ZERO
        rows.append(row(members, f, Relation.EQ, value, f"share[{f}]"))
        for subset in enumerate_feasible_sets(inst, f, cap):
            if subset:
                rows.append(row(subset, f, Relation.GE, coalition_value(inst, f, subset),
                                f"block[{f}:{','.join(inst.ordered(subset))}]"))
    return LpProblem(tuple(ZERO for _ in range(n)), tuple(rows), labels)


def _describe(inst: MarketInstance, X: Assignment) -> str:
    parts = [f"{f}:{{{','.join(inst.ordered(X.matched_set(f)))}}}" for f in inst.firms]
    return " ".join(parts)


def stable_exists(inst: MarketInstance, cap: int = DEFAULT_ASSIGN_CAP,
                  enum_cap: int = DEFAULT_ENUM_CAP) -> ExistenceVerdict:
    """
    Decides whether any stable arrangement exists.

    Why:
        A stable arrangement's assignment is always efficient, so it is
        enough to try each efficient assignment and ask whether some
        non-negative payoffs share every matched coalition's value while no
        feasible coalition is left short.

    Args:
        inst: Market instance
        cap: Assignment enumeration cap
        enum_cap: Feasible-set enumeration cap

    Returns:
        ExistenceVerdict: witness arrangement for the first supportable
        efficient assignment, or exists=False with one obstruction line per
        assignment tried

    Raises:
        CapExceeded: Either enumeration is over its cap

    Example:
        >>> stable_exists(load_fixture("prop1-nonexistence").instance).exists
        False
    """
    efficient = brute_force_efficient(inst, cap, False, enum_cap)
    obstruction: List[str] = []
    for X in efficient.assignments:
        problem = _support_problem(inst, X, enum_cap)
        sol = solve_lp(problem)
        if not sol.optimal:
            obstruction.append(f"{_describe(inst, X)}: no payoffs share the coalition values "
                               f"without leaving a feasible coalition short")
            continue
        k = len(inst.workers)
        pv = PayoffVector(dict(zip(inst.workers, sol.primal[:k])),
                          dict(zip(inst.firms, sol.primal[k:])))
        logger.debug("support LP feasible for %s", _describe(inst, X))
        return ExistenceVerdict(True, payoffs_to_salaries(inst, X, pv), tuple(obstruction))
    logger.info("no stable arrangement: %d efficient assignment(s) unsupportable", len(obstruction))
    return ExistenceVerdict(False, None, tuple(obstruction))


# --- demand ---

def _check_salaries(inst: MarketInstance, salaries: Mapping[str, Fraction]) -> None:
    inst.require_workers(salaries.keys())
    missing = [w for w in inst.workers if w not in salaries]
    if missing:
        raise PreconditionError(f"salary vector misses workers {missing}")


def demand_correspondence(inst: MarketInstance, firm: str, salaries: Mapping[str, Fraction],
                          cap: int = DEFAULT_ENUM_CAP) -> List[WorkerSet]:
    """
    All feasible worker sets (or the empty set) maximising the firm's own
    value minus the salaries paid, in canonical order.

    Raises:
        CapExceeded: Enumeration over cap
        PreconditionError: Salary vector not total over the workers
        UnknownAgentError: Salary for an undeclared worker
    """
    inst.require_firm(firm)
    _check_salaries(inst, salaries)
    candidates = [frozenset()] + [s for s in enumerate_feasible_sets(inst, firm, cap) if s]
    profits = [firm_set_value(inst, firm, s) - sum((Fraction(salaries[w]) for w in s), ZERO)
               for s in candidates]
    best = max(profits)
    return [s for s, p in zip(candidates, profits) if p == best]


def check_substitutes_violation(inst: MarketInstance, firm: str, s: Mapping[str, Fraction],
                                s_prime: Mapping[str, Fraction], worker: str,
                                cap: int = DEFAULT_ENUM_CAP) -> SubstitutesVerdict:
    """
    Tests the substitutes condition for a raise of one worker's salary.

    Why:
        Under substitutes, every set demanded before the raise keeps its
        other workers demanded afterwards; a set that loses some of them is
        the witness of a violation.

    Args:
        inst: Market instance
        firm: Firm whose demand is tested
        s: Salaries before
        s_prime: Salaries after; equal to s except strictly higher at worker
        worker: Worker whose salary rises
        cap: Enumeration cap

    Returns:
        SubstitutesVerdict: violated with the first offending set, plus
        both demand sets

    Raises:
        PreconditionError: The vectors differ elsewhere or do not rise at worker
        UnknownAgentError: Undeclared worker

    Example:
        >>> check_substitutes_violation(inst, "f", s, s_prime, "w1").witness   # raise 0.5 -> 1.1
        frozenset({'w1', 'w3'})
    """
    inst.require_workers([worker])
    if set(s) != set(s_prime):
        raise PreconditionError("salary vectors cover different workers")
    changed = [w for w in s if Fraction(s[w]) != Fraction(s_prime[w])]
    if changed != [worker] or Fraction(s_prime[worker]) <= Fraction(s[worker]):
        raise PreconditionError(f"salaries must rise at {worker!r} and nowhere else")
    before = demand_correspondence(inst, firm, s, cap)
    after = demand_correspondence(inst, firm, s_prime, cap)
    for demanded in before:
        kept = demanded - {worker}
        if not any(kept <= other for other in after):
            return SubstitutesVerdict(True, demanded, tuple(before), tuple(after))
    return SubstitutesVerdict(False, None, tuple(before), tuple(after))

