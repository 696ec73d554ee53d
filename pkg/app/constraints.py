"""
Structure checks on hiring-constraint families and enumeration of the
feasible worker sets of a firm.
"""
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
import logging
from typing import Iterator, List, Optional, Tuple

from .errors import CapExceeded
from .market import ConstraintFamily, MarketInstance, WorkerSet

logger = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 2 ** 20


class StructureStatus(Enum):
    """Outcome of a structure check."""
    HOLDS = "holds"
    VIOLATED = "violated"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class StructureVerdict:
    """Result of a structure check; witness names the offending subsets."""
    status: StructureStatus
    witness: Optional[Tuple[WorkerSet, ...]] = None
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.status is StructureStatus.HOLDS


_HOLDS = StructureVerdict(StructureStatus.HOLDS)


def _violated(reason: str, *witness: WorkerSet) -> StructureVerdict:
    return StructureVerdict(StructureStatus.VIOLATED, tuple(witness), reason)


def _pairs(family: ConstraintFamily) -> Iterator[Tuple[WorkerSet, WorkerSet]]:
    return combinations(family.members(), 2)


def crosses(first: WorkerSet, second: WorkerSet) -> bool:
    """True when the sets overlap and neither contains the other."""
    return bool(first & second) and bool(first - second) and bool(second - first)


def is_hierarchy(family: ConstraintFamily) -> StructureVerdict:
    """
    Checks that every pair of subsets is nested or disjoint.

    Args:
        family: Constraint family

    Returns:
        StructureVerdict: HOLDS, or VIOLATED with the first crossing pair

    Example:
        >>> is_hierarchy(family_from_triples([({"w1", "w2"}, 0, 1), ({"w2", "w3"}, 0, 1)])).holds
        False
    """
    for first, second in _pairs(family):
        if crosses(first, second):
            return _violated("subsets are neither nested nor disjoint", first, second)
    return _HOLDS


def is_intersecting_family(family: ConstraintFamily) -> StructureVerdict:
    """
    Checks closure under union and intersection for every crossing pair.

    Why:
        Submodularity of quotas is only meaningful on a family closed this
        way; the polymatroid checks build on it.

    Args:
        family: Constraint family (never contains the empty set)

    Returns:
        StructureVerdict: HOLDS, or VIOLATED with the pair whose union or
        intersection is missing

    Example:
        >>> fam = family_from_triples([({"w1", "w2"}, 0, 1), ({"w2", "w3"}, 0, 1)])
        >>> is_intersecting_family(fam).status
        <StructureStatus.VIOLATED: 'violated'>
    """
    for first, second in _pairs(family):
        if not crosses(first, second):
            continue
        if (first & second) not in family or (first | second) not in family:
            return _violated("union or intersection of a crossing pair is not a member",
                             first, second)
    return _HOLDS


def _submodular(family: ConstraintFamily) -> StructureVerdict:
    for first, second in _pairs(family):
        if not crosses(first, second):
            continue
        union, meet = first | second, first & second
        if family.upper(first) + family.upper(second) < family.upper(union) + family.upper(meet):
            return _violated("upper quotas are not submodular", first, second)
    return _HOLDS


def _supermodular(family: ConstraintFamily) -> StructureVerdict:
    for first, second in _pairs(family):
        if not crosses(first, second):
            continue
        union, meet = first | second, first & second
        if family.lower(first) + family.lower(second) > family.lower(union) + family.lower(meet):
            return _violated("lower quotas are not supermodular", first, second)
    return _HOLDS


def is_polymatroid(family: ConstraintFamily) -> StructureVerdict:
    """
    Intersecting family with submodular upper quotas; lower quotas ignored.

    Example:
        >>> fam = family_from_triples([({"w1", "w2"}, 0, 1), ({"w2", "w3"}, 0, 1),
        ...                            ({"w2"}, 0, 1), ({"w1", "w2", "w3"}, 0, 1)])
        >>> is_polymatroid(fam).holds
        True
    """
    verdict = is_intersecting_family(family)
    if not verdict.holds:
        return verdict
    return _submodular(family)


def _lookup(family: ConstraintFamily, subset: WorkerSet, upper: bool) -> Optional[int]:
    """Quota of a set with the empty set valued 0; None for other non-members."""
    if not subset:
        return 0
    if subset not in family:
        return None
    return family.upper(subset) if upper else family.lower(subset)


def is_generalized_polymatroid(family: ConstraintFamily) -> StructureVerdict:
    """
    Checks the generalized polymatroid conditions on a quota family.

    Why:
        With lower quotas the LP is only guaranteed integral when the upper
        quotas are submodular, the lower quotas supermodular, and the two
        are compatible through the cross-inequality
        lower(D) - lower(D minus D') <= upper(D') - upper(D' minus D).

    Args:
        family: Constraint family with lower and upper quotas

    Returns:
        StructureVerdict: VIOLATED with a witness pair on the first failing
        condition; INDETERMINATE when a cross-inequality needs a quota of a
        non-empty set outside the family and no violation was found; HOLDS
        otherwise

    Example:
        >>> is_generalized_polymatroid(family_from_triples([({"w1", "w2"}, 2, 2)])).holds
        True
    """
    for check in (is_intersecting_family, _submodular, _supermodular):
        verdict = check(family)
        if not verdict.holds:
            return verdict
    undefined: Optional[Tuple[WorkerSet, WorkerSet]] = None
    for first in family.members():
        for second in family.members():
            rho_rest = _lookup(family, first - second, upper=False)
            g_rest = _lookup(family, second - first, upper=True)
            if rho_rest is None or g_rest is None:
                undefined = undefined or (first, second)
                continue
            if family.lower(first) - rho_rest > family.upper(second) - g_rest:
                return _violated("cross-inequality between lower and upper quotas fails",
                                 first, second)
    if undefined is not None:
        return StructureVerdict(StructureStatus.INDETERMINATE, undefined,
                                "a set difference is neither empty nor a member")
    return _HOLDS


def is_feasible_set(family: ConstraintFamily, subset: WorkerSet) -> bool:
    """True when lower <= |subset & D| <= upper for every entry D."""
    return all(entry.lower <= len(subset & entry.subset) <= entry.upper for entry in family)


@dataclass(frozen=True)
class FeasibilityCollection:
    """Feasible worker sets of one firm in canonical order."""
    firm: str
    sets: Tuple[WorkerSet, ...]
    _members: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.sets))

    def __contains__(self, subset: object) -> bool:
        return subset in self._members

    def __iter__(self):
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


def enumerate_feasible_sets(inst: MarketInstance, firm: str,
                            cap: int = DEFAULT_ENUM_CAP) -> FeasibilityCollection:
    """
    Lists every worker set satisfying all quota constraints of a firm.

    Why:
        Stability, demand and the brute-force oracles all quantify over this
        collection; sizes are desk scale so it is materialised explicitly.

    Args:
        inst: Market instance
        firm: Firm whose family is applied
        cap: Largest admissible 2^|W|

    Returns:
        FeasibilityCollection: Sets ordered by size, then by sorted member
        positions

    Raises:
        CapExceeded: 2^|W| exceeds cap
        UnknownAgentError: Undeclared firm

    Example:
        >>> [sorted(s) for s in enumerate_feasible_sets(inst, "f")]
        [[], ['w1'], ['w2'], ['w3'], ['w1', 'w3']]
    """
    family = inst.family(firm)
    size = 2 ** len(inst.workers)
    if size > cap:
        logger.info("refusing to enumerate %d subsets for firm %s (cap %d)", size, firm, cap)
        raise CapExceeded(f"2^{len(inst.workers)} subsets exceed enumeration cap {cap}")
    found: List[WorkerSet] = []
    for k in range(len(inst.workers) + 1):
        for combo in combinations(inst.workers, k):
            subset = frozenset(combo)
            if is_feasible_set(family, subset):
                found.append(subset)
    logger.debug("firm %s: %d feasible sets", firm, len(found))
    return FeasibilityCollection(firm, tuple(found))
