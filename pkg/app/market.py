"""
Market model for many-to-one matching with transfers under hiring quotas.

Defines the domain types (instances, constraint families, assignments,
arrangements, payoff vectors), parses and serialises instance documents,
and evaluates match and coalition values with exact rationals.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import json
import re
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError

from . import DOCUMENT_VERSION
from .errors import (InstanceValueError, ModeError, SchemaError, UnknownAgentError,
                     UnknownSetError)

Rational = Fraction
WorkerSet = FrozenSet[str]
Pair = Tuple[str, str]

_DECIMAL_RE = re.compile(r"^[+-]?\d+(\.\d+)?$")
_RATIO_RE = re.compile(r"^[+-]?\d+/\d+$")


class PreferenceMode(Enum):
    """How firms value sets of workers."""
    LINEAR = "linear"
    GENERAL = "general"


@dataclass(frozen=True)
class ConstraintEntry:
    """One quota row: lower <= |D cap subset| <= upper."""
    subset: WorkerSet
    lower: int
    upper: int


@dataclass(frozen=True)
class ConstraintFamily:
    """
    A firm's hiring constraints: distinct non-empty worker subsets with quotas.

    Why:
        Quotas are only ever looked up by subset (structure checks) or
        iterated in file order (LP rows, reports), so the family keeps the
        entries as an ordered tuple plus a lookup by subset.

    Args:
        entries: Constraint entries in file order

    Returns:
        None

    Raises:
        InstanceValueError: Empty subset, negative quota, lower > upper or a
            duplicate subset

    Example:
        >>> fam = ConstraintFamily((ConstraintEntry(frozenset({"w1"}), 0, 1),))
        >>> fam.upper(frozenset({"w1"}))
        1
    """
    entries: Tuple[ConstraintEntry, ...] = ()
    _by_subset: Dict[WorkerSet, ConstraintEntry] = field(
        default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        for entry in self.entries:
            if not entry.subset:
                raise InstanceValueError("constraint subsets must be non-empty")
            if entry.lower < 0 or entry.upper < 0:
                raise InstanceValueError(f"negative quota on {sorted(entry.subset)}")
            if entry.lower > entry.upper:
                raise InstanceValueError(
                    f"lower quota {entry.lower} exceeds upper quota {entry.upper} "
                    f"on {sorted(entry.subset)}")
            if entry.subset in self._by_subset:
                raise InstanceValueError(f"duplicate constraint subset {sorted(entry.subset)}")
            self._by_subset[entry.subset] = entry

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, subset: object) -> bool:
        return subset in self._by_subset

    def members(self) -> Tuple[WorkerSet, ...]:
        """Subsets of the family in file order."""
        return tuple(entry.subset for entry in self.entries)

    def upper(self, subset: WorkerSet) -> int:
        """Upper quota of a member subset."""
        return self._by_subset[subset].upper

    def lower(self, subset: WorkerSet) -> int:
        """Lower quota of a member subset."""
        return self._by_subset[subset].lower

    def has_lower_bounds(self) -> bool:
        """True when any entry carries a positive lower quota."""
        return any(entry.lower > 0 for entry in self.entries)


def family_from_triples(triples: Iterable[Tuple[Iterable[str], int, int]]) -> ConstraintFamily:
    """Builds a ConstraintFamily from (subset, lower, upper) triples."""
    return ConstraintFamily(tuple(
        ConstraintEntry(frozenset(subset), int(lower), int(upper))
        for subset, lower, upper in triples))


@dataclass(frozen=True)
class MarketInstance:
    """
    A two-sided market: workers, firms, values and per-firm quota families.

    Why:
        Every solver and checker reads the same immutable instance; ordering
        of workers and firms is the document order and drives all canonical
        output orderings.

    Args:
        workers: Worker identifiers in file order
        firms: Firm identifiers in file order
        worker_values: a[w, f] for every pair
        preference_mode: LINEAR or GENERAL
        firm_values_linear: c[w, f] for every pair (LINEAR only)
        firm_values_general: firm -> {worker set: b} (GENERAL only)
        constraints: firm -> ConstraintFamily

    Returns:
        None

    Raises:
        None (use build_instance for validated construction)

    Example:
        >>> inst = build_instance(["w"], ["f"], {("w", "f"): Fraction(0)},
        ...                       firm_values_linear={("w", "f"): Fraction(1)})
        >>> match_value(inst, "w", "f")
        Fraction(1, 1)
    """
    workers: Tuple[str, ...]
    firms: Tuple[str, ...]
    worker_values: Mapping[Pair, Fraction]
    preference_mode: PreferenceMode
    firm_values_linear: Mapping[Pair, Fraction]
    firm_values_general: Mapping[str, Mapping[WorkerSet, Fraction]]
    constraints: Mapping[str, ConstraintFamily]

    def family(self, firm: str) -> ConstraintFamily:
        """Constraint family of a firm (empty when none declared)."""
        self.require_firm(firm)
        return self.constraints.get(firm, ConstraintFamily())

    def worker_index(self, worker: str) -> int:
        """Position of a worker in file order."""
        try:
            return self.workers.index(worker)
        except ValueError as exc:
            raise UnknownAgentError(f"unknown worker {worker!r}") from exc

    def require_firm(self, firm: str) -> None:
        """Raises UnknownAgentError for undeclared firms."""
        if firm not in self.firms:
            raise UnknownAgentError(f"unknown firm {firm!r}")

    def require_workers(self, workers: Iterable[str]) -> None:
        """Raises UnknownAgentError when any worker is undeclared."""
        known = set(self.workers)
        missing = [w for w in workers if w not in known]
        if missing:
            raise UnknownAgentError(f"unknown worker(s) {sorted(missing)}")

    def subset_key(self, subset: Iterable[str]) -> Tuple[int, Tuple[int, ...]]:
        """Canonical sort key: size, then sorted member positions."""
        positions = tuple(sorted(self.worker_index(w) for w in subset))
        return (len(positions), positions)

    def ordered(self, subset: Iterable[str]) -> List[str]:
        """Members of a subset in worker file order."""
        members = set(subset)
        return [w for w in self.workers if w in members]

    def max_worker_value(self) -> Fraction:
        """Largest a[w, f] over all pairs (0 for an empty market)."""
        return max(self.worker_values.values(), default=Fraction(0))


@dataclass(frozen=True)
class Assignment:
    """Worker -> firm map; None marks an unmatched worker."""
    assigned: Mapping[str, Optional[str]]

    def firm_of(self, worker: str) -> Optional[str]:
        """Firm a worker is matched to, or None."""
        return self.assigned.get(worker)

    def matched_set(self, firm: str) -> WorkerSet:
        """Workers matched to a firm (D_f)."""
        return frozenset(w for w, f in self.assigned.items() if f == firm)

    def matched_pairs(self) -> List[Pair]:
        """All (worker, firm) pairs with a match."""
        return [(w, f) for w, f in self.assigned.items() if f is not None]

    @classmethod
    def unmatched(cls, inst: MarketInstance) -> "Assignment":
        """Assignment leaving every worker unmatched."""
        return cls({w: None for w in inst.workers})

    @classmethod
    def from_sets(cls, inst: MarketInstance, sets: Mapping[str, Iterable[str]]) -> "Assignment":
        """Builds an assignment from firm -> worker set."""
        assigned: Dict[str, Optional[str]] = {w: None for w in inst.workers}
        for firm in inst.firms:
            for worker in sets.get(firm, ()):
                inst.require_workers([worker])
                if assigned[worker] is not None:
                    raise InstanceValueError(f"worker {worker!r} assigned twice")
                assigned[worker] = firm
        return cls(assigned)


@dataclass(frozen=True)
class Arrangement:
    """An assignment plus a full prospective salary matrix s[f][w]."""
    assignment: Assignment
    salaries: Mapping[str, Mapping[str, Fraction]]

    def salary(self, worker: str, firm: str) -> Fraction:
        """Prospective salary of a pair."""
        return self.salaries[firm][worker]


@dataclass(frozen=True)
class PayoffVector:
    """Worker payoffs u and firm payoffs v."""
    worker_payoffs: Mapping[str, Fraction]
    firm_payoffs: Mapping[str, Fraction]

    def total(self) -> Fraction:
        """Sum of all payoffs."""
        return sum(self.worker_payoffs.values(), Fraction(0)) + \
            sum(self.firm_payoffs.values(), Fraction(0))


# --- numeric text ---

# int() and str() refuse very long digit strings; these work in blocks.
_DIGIT_BLOCK = 1000


def _int_from_digits(digits: str) -> int:
    value = 0
    for start in range(0, len(digits), _DIGIT_BLOCK):
        block = digits[start:start + _DIGIT_BLOCK]
        value = value * 10 ** len(block) + int(block)
    return value


def _digits_of(value: int) -> str:
    """Decimal digits of a non-negative integer of any size."""
    base = 10 ** _DIGIT_BLOCK
    blocks = []
    while value >= base:
        value, low = divmod(value, base)
        blocks.append(str(low).rjust(_DIGIT_BLOCK, "0"))
    blocks.append(str(value))
    return "".join(reversed(blocks))


def _signed_digits(value: int) -> str:
    return ("-" if value < 0 else "") + _digits_of(abs(value))


def _exact(text: str) -> Fraction:
    """Decimal or p/q text already matched by one of the patterns."""
    sign = -1 if text.startswith("-") else 1
    body = text.lstrip("+-")
    if "/" in body:
        num, den = body.split("/")
        if not den.strip("0"):
            raise InstanceValueError(f"zero denominator: {text!r}")
        return Fraction(sign * _int_from_digits(num), _int_from_digits(den))
    whole, _, frac = body.partition(".")
    return Fraction(sign * _int_from_digits(whole + frac), 10 ** len(frac))


def parse_decimal(value: Union[str, int]) -> Fraction:
    """
    Converts a finite decimal string (or JSON integer) to an exact rational.

    Why:
        Integrality and duality checks downstream are exact equalities; a
        float would make them meaningless.

    Args:
        value: Decimal text such as "-0.5" or an integer

    Returns:
        Fraction: The exact value

    Raises:
        InstanceValueError: For anything that is not a finite decimal

    Example:
        >>> parse_decimal("1.1")
        Fraction(11, 10)
    """
    if isinstance(value, bool):
        raise InstanceValueError(f"not a decimal number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _DECIMAL_RE.match(value.strip()):
        return _exact(value.strip())
    raise InstanceValueError(f"not a finite decimal string: {value!r}")


def parse_rational(value: Union[str, int]) -> Fraction:
    """Like parse_decimal, also accepting "p/q" (used by arrangement documents)."""
    if isinstance(value, str) and _RATIO_RE.match(value.strip()):
        return _exact(value.strip())
    return parse_decimal(value)


def format_rational(value: Fraction) -> str:
    """
    Renders a rational exactly: finite decimal when possible, else "p/q".

    Args:
        value: Any Fraction

    Returns:
        str: e.g. "1.5", "-2", "1/3"

    Example:
        >>> format_rational(Fraction(3, 2))
        '1.5'
    """
    value = Fraction(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{_signed_digits(value.numerator)}/{_digits_of(value.denominator)}"
    places = max(twos, fives)
    if places == 0:
        return _signed_digits(value.numerator)
    scaled = abs(value.numerator) * (10 ** places) // value.denominator
    sign = "-" if value < 0 else ""
    digits = _digits_of(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


# --- document schema ---

NumberText = Union[StrictStr, StrictInt]


class SubsetValueDoc(BaseModel):
    """General-mode valuation entry."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)
    members: List[StrictStr] = Field(alias="set")
    value: NumberText


class ConstraintDoc(BaseModel):
    """Quota entry; omitted bounds default to 0 and |set|."""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)
    members: List[StrictStr] = Field(alias="set")
    lower: Optional[StrictInt] = Field(default=None, ge=0)
    upper: Optional[StrictInt] = Field(default=None, ge=0)


class InstanceDoc(BaseModel):
    """Top-level instance document, version 1."""
    model_config = ConfigDict(extra="forbid")
    version: StrictInt
    mode: StrictStr
    workers: List[StrictStr]
    firms: List[StrictStr]
    worker_values: Dict[StrictStr, Dict[StrictStr, NumberText]]
    firm_values: Dict[StrictStr, Union[Dict[StrictStr, NumberText], List[SubsetValueDoc]]]
    constraints: Dict[StrictStr, List[ConstraintDoc]] = Field(default_factory=dict)


def _pair_table(raw: Mapping[str, Mapping[str, NumberText]], inst_workers: List[str],
                inst_firms: List[str], what: str) -> Dict[Pair, Fraction]:
    """Reads a worker -> firm -> value table and checks it is total."""
    _check_known(raw.keys(), inst_workers, "worker")
    table: Dict[Pair, Fraction] = {}
    for worker in inst_workers:
        row = raw.get(worker)
        if row is None:
            raise SchemaError(f"{what}: missing row for worker {worker!r}")
        _check_known(row.keys(), inst_firms, "firm")
        for firm in inst_firms:
            if firm not in row:
                raise SchemaError(f"{what}: missing value for ({worker!r}, {firm!r})")
            table[(worker, firm)] = parse_decimal(row[firm])
    return table


def _check_known(names: Iterable[str], declared: List[str], kind: str) -> None:
    unknown = [name for name in names if name not in declared]
    if unknown:
        raise UnknownAgentError(f"unknown {kind}(s) {sorted(unknown)}")


def _check_unique(names: List[str], kind: str) -> None:
    if len(set(names)) != len(names):
        raise InstanceValueError(f"duplicate {kind} identifiers")


def _general_table(raw, workers: List[str], firms: List[str]) -> Dict[str, Dict[WorkerSet, Fraction]]:
    """Reads firm -> [{set, value}] valuation tables."""
    _check_known(raw.keys(), firms, "firm")
    tables: Dict[str, Dict[WorkerSet, Fraction]] = {}
    for firm in firms:
        entries = raw.get(firm, [])
        if not isinstance(entries, list):
            raise SchemaError(f"general firm_values for {firm!r} must be a list")
        table: Dict[WorkerSet, Fraction] = {}
        for entry in entries:
            _check_known(entry.members, workers, "worker")
            subset = frozenset(entry.members)
            if not subset:
                raise InstanceValueError("the empty set is valued at zero implicitly")
            if subset in table:
                raise InstanceValueError(f"duplicate valuation for {sorted(subset)}")
            table[subset] = parse_decimal(entry.value)
        tables[firm] = table
    return tables


def _constraint_families(raw: Mapping[str, List[ConstraintDoc]], workers: List[str],
                         firms: List[str]) -> Dict[str, ConstraintFamily]:
    _check_known(raw.keys(), firms, "firm")
    families: Dict[str, ConstraintFamily] = {}
    for firm in firms:
        triples = []
        for entry in raw.get(firm, []):
            _check_known(entry.members, workers, "worker")
            subset = frozenset(entry.members)
            lower = 0 if entry.lower is None else entry.lower
            upper = len(subset) if entry.upper is None else entry.upper
            triples.append((subset, lower, upper))
        families[firm] = family_from_triples(triples)
    return families


def _linear_values(pairs: List[Pair], firm_values: Mapping[Pair, Fraction]) -> Dict[Pair, Fraction]:
    missing = [p for p in pairs if p not in firm_values]
    if missing:
        raise SchemaError(f"firm_values missing pairs {missing}")
    return {p: Fraction(firm_values[p]) for p in pairs}


def _general_values(firm_values: Mapping[str, Mapping[WorkerSet, Fraction]], workers: List[str],
                    firms: List[str]) -> Dict[str, Dict[WorkerSet, Fraction]]:
    if len(firms) != 1:
        raise InstanceValueError("general valuations require exactly one firm")
    _check_known(firm_values.keys(), firms, "firm")
    for table in firm_values.values():
        for subset in table:
            _check_known(subset, workers, "worker")
    return {f: {frozenset(s): Fraction(v) for s, v in firm_values.get(f, {}).items()}
            for f in firms}


def _check_family_agents(families: Mapping[str, ConstraintFamily], workers: List[str],
                         firms: List[str]) -> None:
    _check_known(families.keys(), firms, "firm")
    for family in families.values():
        for subset in family.members():
            _check_known(subset, workers, "worker")


def build_instance(workers: Iterable[str], firms: Iterable[str],
                   worker_values: Mapping[Pair, Fraction],
                   firm_values_linear: Optional[Mapping[Pair, Fraction]] = None,
                   firm_values_general: Optional[Mapping[str, Mapping[WorkerSet, Fraction]]] = None,
                   constraints: Optional[Mapping[str, ConstraintFamily]] = None) -> MarketInstance:
    """
    Validated programmatic construction of a MarketInstance.

    Why:
        Tests, fixtures and generators build instances in code; they get the
        same invariants as parsed documents.

    Args:
        workers, firms: Identifiers in order
        worker_values: a[w, f] for every pair
        firm_values_linear: c[w, f] (selects LINEAR mode)
        firm_values_general: firm -> {set: b} (selects GENERAL mode)
        constraints: firm -> ConstraintFamily

    Returns:
        MarketInstance

    Raises:
        InstanceValueError: Mode ambiguity, General mode with several firms,
            duplicate identifiers
        SchemaError: Missing pair values
        UnknownAgentError: Subsets or keys naming undeclared agents

    Example:
        >>> build_instance([], ["f"], {}, firm_values_linear={}).firms
        ('f',)
    """
    workers, firms = list(workers), list(firms)
    _check_unique(workers, "worker")
    _check_unique(firms, "firm")
    if (firm_values_linear is None) == (firm_values_general is None):
        raise InstanceValueError("exactly one of linear or general firm values is required")
    mode = PreferenceMode.LINEAR if firm_values_general is None else PreferenceMode.GENERAL
    pairs = [(w, f) for w in workers for f in firms]
    missing = [p for p in pairs if p not in worker_values]
    if missing:
        raise SchemaError(f"worker_values missing pairs {missing}")
    linear: Dict[Pair, Fraction] = {}
    general: Dict[str, Dict[WorkerSet, Fraction]] = {}
    if mode is PreferenceMode.LINEAR:
        linear = _linear_values(pairs, firm_values_linear)
    else:
        general = _general_values(firm_values_general, workers, firms)
    families = dict(constraints or {})
    _check_family_agents(families, workers, firms)
    return MarketInstance(
        workers=tuple(workers), firms=tuple(firms),
        worker_values={p: Fraction(worker_values[p]) for p in pairs},
        preference_mode=mode, firm_values_linear=linear, firm_values_general=general,
        constraints={f: families.get(f, ConstraintFamily()) for f in firms})


def parse_instance(text: Union[bytes, str]) -> MarketInstance:
    """
    Parses and validates an instance document.

    Why:
        Single entry point from files to the exact-rational domain model;
        shape errors and semantic errors are reported with distinct types.

    Args:
        text: JSON document (bytes or str)

    Returns:
        MarketInstance

    Raises:
        SchemaError: Malformed JSON, missing fields, wrong shapes, bad version
        InstanceValueError: Non-decimal numbers, lower > upper, duplicate or
            empty subsets, General mode with several firms
        UnknownAgentError: References to undeclared workers or firms

    Example:
        >>> doc = '{"version": 1, "mode": "linear", "workers": [], "firms": ["f"],'
        >>> doc += ' "worker_values": {}, "firm_values": {}}'
        >>> parse_instance(doc).firms
        ('f',)
    """
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"not a JSON document: {exc}") from exc
    try:
        doc = InstanceDoc.model_validate(raw)
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc
    if doc.version != DOCUMENT_VERSION:
        raise SchemaError(f"unsupported document version {doc.version}")
    if doc.mode not in ("linear", "general"):
        raise SchemaError(f"mode must be 'linear' or 'general', got {doc.mode!r}")
    workers, firms = list(doc.workers), list(doc.firms)
    _check_unique(workers, "worker")
    _check_unique(firms, "firm")
    worker_values = _pair_table(doc.worker_values, workers, firms, "worker_values")
    families = _constraint_families(doc.constraints, workers, firms)
    if doc.mode == "linear":
        if any(not isinstance(row, dict) for row in doc.firm_values.values()):
            raise SchemaError("linear firm_values must map worker -> firm -> value")
        linear = _pair_table(doc.firm_values, workers, firms, "firm_values")
        return build_instance(workers, firms, worker_values, firm_values_linear=linear,
                              constraints=families)
    if len(firms) != 1:
        raise InstanceValueError("general mode requires exactly one firm")
    general = _general_table(doc.firm_values, workers, firms)
    return build_instance(workers, firms, worker_values, firm_values_general=general,
                          constraints=families)


def instance_to_document(inst: MarketInstance) -> dict:
    """Document form of an instance (inverse of parse_instance)."""
    fmt = format_rational
    doc = {
        "version": DOCUMENT_VERSION,
        "mode": inst.preference_mode.value,
        "workers": list(inst.workers),
        "firms": list(inst.firms),
        "worker_values": {w: {f: fmt(inst.worker_values[(w, f)]) for f in inst.firms}
                          for w in inst.workers},
    }
    if inst.preference_mode is PreferenceMode.LINEAR:
        doc["firm_values"] = {w: {f: fmt(inst.firm_values_linear[(w, f)]) for f in inst.firms}
                              for w in inst.workers}
    else:
        doc["firm_values"] = {
            f: [{"set": inst.ordered(s), "value": fmt(v)}
                for s, v in inst.firm_values_general.get(f, {}).items()]
            for f in inst.firms}
    doc["constraints"] = {
        f: [{"set": inst.ordered(e.subset), "lower": e.lower, "upper": e.upper}
            for e in inst.family(f)]
        for f in inst.firms}
    return doc


def serialize_instance(inst: MarketInstance) -> str:
    """Instance document as deterministic JSON text."""
    return json.dumps(instance_to_document(inst), indent=2) + "\n"


# --- values ---

def match_value(inst: MarketInstance, worker: str, firm: str) -> Fraction:
    """
    Joint surplus alpha[w, f] = a[w, f] + c[w, f] of a pair.

    Args:
        inst: Linear-mode instance
        worker, firm: The pair

    Returns:
        Fraction: Exact match value

    Raises:
        ModeError: General-mode instance
        UnknownAgentError: Undeclared worker or firm

    Example:
        >>> match_value(inst, "w2", "f1")   # pair valued 0 + 1.1
        Fraction(11, 10)
    """
    if inst.preference_mode is not PreferenceMode.LINEAR:
        raise ModeError("match values are defined for linear preferences only")
    inst.require_firm(firm)
    inst.require_workers([worker])
    return inst.worker_values[(worker, firm)] + inst.firm_values_linear[(worker, firm)]


def firm_set_value(inst: MarketInstance, firm: str, subset: Iterable[str]) -> Fraction:
    """
    Firm's own value b[D, f] for hiring a set (0 for the empty set).

    Raises:
        UnknownSetError: General mode, non-empty set absent from the table
    """
    subset = frozenset(subset)
    inst.require_firm(firm)
    inst.require_workers(subset)
    if not subset:
        return Fraction(0)
    if inst.preference_mode is PreferenceMode.LINEAR:
        return sum((inst.firm_values_linear[(w, firm)] for w in subset), Fraction(0))
    table = inst.firm_values_general.get(firm, {})
    if subset not in table:
        raise UnknownSetError(f"no valuation for {inst.ordered(subset)} at firm {firm!r}")
    return table[subset]


def coalition_value(inst: MarketInstance, firm: str, subset: Iterable[str]) -> Fraction:
    """
    Value b[D, f] + sum of a[w, f] created when a firm hires a worker set.

    Why:
        Every stability inequality compares payoffs against this quantity;
        salaries cancel inside a coalition.

    Args:
        inst: Instance (either mode)
        firm: Hiring firm
        subset: Worker set D (may be empty)

    Returns:
        Fraction: Exact coalition value; 0 for the empty set

    Raises:
        UnknownSetError: General mode, D non-empty and not in the table
        UnknownAgentError: Undeclared agents

    Example:
        >>> coalition_value(inst, "f1", {"w1", "w3"})   # 0.9 + 1.0
        Fraction(19, 10)
    """
    subset = frozenset(subset)
    own = firm_set_value(inst, firm, subset)
    return own + sum((inst.worker_values[(w, firm)] for w in subset), Fraction(0))
