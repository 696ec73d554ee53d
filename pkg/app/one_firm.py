"""
Stable arrangements for single-firm markets by direct enumeration.

With one firm the stable arrangement needs no LP: the firm hires the
feasible set with the largest coalition value and every hired worker is
paid exactly their reservation salary.
"""
import logging

from .constraints import DEFAULT_ENUM_CAP, enumerate_feasible_sets
from .errors import MultiFirm, NoFeasibleAssignment
from .market import Arrangement, Assignment, MarketInstance, coalition_value

logger = logging.getLogger(__name__)


def solve_one_firm(inst: MarketInstance, cap: int = DEFAULT_ENUM_CAP,
                   r_mode: bool = False) -> Arrangement:
    """
    Builds a stable (or r-stable) arrangement for a one-firm market.

    Why:
        The firm's best set D* over its feasible sets (plus the empty set)
        is hired at salaries s = -a, leaving each hired worker payoff 0 and
        the whole coalition value to the firm. Everyone else is offered a
        salary below -a so no worker wants to switch, and no feasible set
        can beat D* for the firm. Works for linear and general valuations.

    Args:
        inst: Instance with exactly one firm
        cap: Enumeration cap for the feasible sets
        r_mode: Choose among feasible sets only (the empty set only when it
            is itself feasible); the result is r-stable and r-efficient

    Returns:
        Arrangement: D* ties broken by canonical set order (empty first)

    Raises:
        MultiFirm: More or fewer than one firm
        CapExceeded: Enumeration over cap
        UnknownSetError: General mode table misses a feasible set
        NoFeasibleAssignment: r_mode and no feasible set exists

    Example:
        >>> arr = solve_one_firm(load_fixture("example1-substitutes").instance)
        >>> sorted(arr.assignment.matched_set("f"))
        ['w2']
    """
    if len(inst.firms) != 1:
        raise MultiFirm(f"one-firm construction needs exactly one firm, got {len(inst.firms)}")
    firm = inst.firms[0]
    collection = enumerate_feasible_sets(inst, firm, cap)
    candidates = list(collection)
    if not r_mode and frozenset() not in collection:
        candidates.insert(0, frozenset())
    if not candidates:
        raise NoFeasibleAssignment(f"firm {firm!r} has no feasible worker set")
    best, best_value = None, None
    for subset in candidates:
        value = coalition_value(inst, firm, subset)
        if best_value is None or value > best_value:
            best, best_value = subset, value
    logger.debug("one-firm optimum %s with value %s", inst.ordered(best), best_value)

    salaries = {firm: {w: -inst.worker_values[(w, firm)] - (0 if w in best else 1)
                       for w in inst.workers}}
    return Arrangement(Assignment.from_sets(inst, {firm: best}), salaries)
