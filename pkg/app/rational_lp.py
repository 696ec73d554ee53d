"""
Exact rational linear programming.

Two-phase tableau simplex over fractions.Fraction with Bland's pivoting
rule. Problems are maximisations over non-negative variables with <=, >=
and = rows; solutions carry a basic primal vertex and signed row duals.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
import logging
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, StatusError
from .market import format_rational

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)
DEFAULT_MAX_FRACTIONAL = 12


class Relation(Enum):
    """Row relation."""
    LE = "<="
    GE = ">="
    EQ = "="


class LpStatus(Enum):
    """Solve outcome."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpRow:
    """One constraint: coefficients . x (relation) rhs."""
    coefficients: Tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction
    label: str = ""

    def activity(self, point: Sequence[Fraction]) -> Fraction:
        """Left-hand side evaluated at a point."""
        return sum((a * x for a, x in zip(self.coefficients, point) if a), ZERO)

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        lhs = self.activity(point)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LpProblem:
    """
    maximise objective . x subject to rows, x >= 0.

    Example:
        >>> p = LpProblem((ONE,), (LpRow((ONE,), Relation.LE, ONE),))
        >>> solve_lp(p).objective_value
        Fraction(1, 1)
    """
    objective: Tuple[Fraction, ...]
    rows: Tuple[LpRow, ...]
    variable_labels: Tuple[str, ...] = ()

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def variable_label(self, index: int) -> str:
        if index < len(self.variable_labels):
            return self.variable_labels[index]
        return f"x{index}"

    def row_label(self, index: int) -> str:
        return self.rows[index].label or f"r{index}"

    def validate(self) -> None:
        """Raises DimensionMismatch when a row is not objective-sized."""
        n = self.num_variables
        for i, row in enumerate(self.rows):
            if len(row.coefficients) != n:
                raise DimensionMismatch(
                    f"row {self.row_label(i)} has {len(row.coefficients)} coefficients, "
                    f"objective has {n}")
        if self.variable_labels and len(self.variable_labels) != n:
            raise DimensionMismatch("variable_labels do not match the objective dimension")

    def with_rows(self, extra: Sequence[LpRow]) -> "LpProblem":
        """Same problem with additional rows appended."""
        return LpProblem(self.objective, self.rows + tuple(extra), self.variable_labels)


@dataclass(frozen=True)
class LpSolution:
    """Solve result; primal, dual and objective are only set when OPTIMAL."""
    status: LpStatus
    primal: Tuple[Fraction, ...] = ()
    dual: Tuple[Fraction, ...] = ()
    objective_value: Optional[Fraction] = None
    basis: Tuple[int, ...] = ()
    vertex_search: bool = False

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


_FLIPPED = {Relation.LE: Relation.GE, Relation.GE: Relation.LE, Relation.EQ: Relation.EQ}


def _orient(row: LpRow) -> Tuple[int, Relation]:
    """Sign that makes the right-hand side non-negative, and the relation after it."""
    if row.rhs < 0:
        return -1, _FLIPPED[row.relation]
    return 1, row.relation


class _Tableau:
    """
    Dense simplex tableau in equality form with one unit column per row.

    Columns are the structural variables, then one slack or surplus per
    inequality row, then one artificial per >= or = row. unit_column[i] is
    the column that starts as the identity column of row i (slack for <=,
    artificial otherwise) and is used to read row duals at the end.
    """

    def __init__(self, problem: LpProblem) -> None:
        n = problem.num_variables
        rows = problem.rows
        self.num_structural = n
        oriented = [_orient(row) for row in rows]
        self.sign: List[int] = [sign for sign, _ in oriented]
        relations: List[Relation] = [relation for _, relation in oriented]
        num_slack = sum(1 for r in relations if r is not Relation.EQ)
        num_art = sum(1 for r in relations if r is not Relation.LE)
        self.first_artificial = n + num_slack
        self.width = n + num_slack + num_art
        self.matrix: List[List[Fraction]] = []
        self.basis: List[int] = []
        self.unit_column: List[int] = []
        slack_at, art_at = n, self.first_artificial
        for row, relation, sign in zip(rows, relations, self.sign):
            line = [sign * Fraction(a) for a in row.coefficients] + [ZERO] * (self.width - n)
            line.append(sign * Fraction(row.rhs))
            if relation is not Relation.EQ:
                line[slack_at] = ONE if relation is Relation.LE else -ONE
                if relation is Relation.LE:
                    self.basis.append(slack_at)
                    self.unit_column.append(slack_at)
                slack_at += 1
            if relation is not Relation.LE:
                line[art_at] = ONE
                self.basis.append(art_at)
                self.unit_column.append(art_at)
                art_at += 1
            self.matrix.append(line)
        self.pivots = 0

    def is_artificial(self, column: int) -> bool:
        return column >= self.first_artificial

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        dual_basis = [cost[b] for b in self.basis]
        result = list(cost)
        for i, c_b in enumerate(dual_basis):
            if not c_b:
                continue
            line = self.matrix[i]
            for j in range(self.width):
                if line[j]:
                    result[j] -= c_b * line[j]
        return result

    def pivot(self, row: int, column: int) -> None:
        line = self.matrix[row]
        factor = line[column]
        if factor != ONE:
            self.matrix[row] = line = [value / factor for value in line]
        for i, other in enumerate(self.matrix):
            if i == row or not other[column]:
                continue
            scale = other[column]
            self.matrix[i] = [a - scale * b for a, b in zip(other, line)]
        self.basis[row] = column
        self.pivots += 1

    def run(self, cost: Sequence[Fraction], allow_artificial: bool) -> bool:
        """Bland's-rule iterations to optimality; False when unbounded."""
        while True:
            reduced = self.reduced_costs(cost)
            entering = next((j for j in range(self.width)
                             if reduced[j] > 0 and (allow_artificial or not self.is_artificial(j))),
                            None)
            if entering is None:
                return True
            leaving, best = None, None
            for i, line in enumerate(self.matrix):
                if line[entering] > 0:
                    ratio = line[-1] / line[entering]
                    if best is None or ratio < best or (
                            ratio == best and self.basis[i] < self.basis[leaving]):
                        leaving, best = i, ratio
            if leaving is None:
                return False
            self.pivot(leaving, entering)

    def drive_out_artificials(self) -> None:
        """Pivots zero-valued artificials out of the basis where possible."""
        for i, column in enumerate(self.basis):
            if not self.is_artificial(column):
                continue
            line = self.matrix[i]
            replacement = next((j for j in range(self.first_artificial) if line[j]), None)
            if replacement is None:
                # redundant row: its artificial stays basic at zero
                logger.debug("row %d is redundant; keeping its artificial basic", i)
                continue
            self.pivot(i, replacement)

    def values(self) -> List[Fraction]:
        point = [ZERO] * self.width
        for i, column in enumerate(self.basis):
            point[column] = self.matrix[i][-1]
        return point

    def row_duals(self, cost: Sequence[Fraction]) -> List[Fraction]:
        """y_i = c_B . (column of row i's starting unit vector), sign restored."""
        duals = []
        for i, unit in enumerate(self.unit_column):
            y = sum((cost[b] * self.matrix[k][unit] for k, b in enumerate(self.basis) if cost[b]),
                    ZERO)
            duals.append(self.sign[i] * y)
        return duals


def solve_lp(p: LpProblem) -> LpSolution:
    """
    Solves maximise c.x subject to the rows and x >= 0 exactly.

    Why:
        Integrality and strong duality are checked with exact equality
        downstream, so every pivot is done in rational arithmetic. Bland's
        rule keeps the run deterministic and cycle-free.

    Args:
        p: Problem in inequality form

    Returns:
        LpSolution: OPTIMAL with a basic primal vertex, signed duals (>= 0
        on <= rows, <= 0 on >= rows, free on = rows) and the objective;
        otherwise INFEASIBLE or UNBOUNDED with empty vectors

    Raises:
        DimensionMismatch: A row's length differs from the objective

    Example:
        >>> p = LpProblem((ONE,), (LpRow((ONE,), Relation.GE, Fraction(2)),
        ...                        LpRow((ONE,), Relation.LE, ONE)))
        >>> solve_lp(p).status
        <LpStatus.INFEASIBLE: 'infeasible'>
    """
    p.validate()
    tableau = _Tableau(p)
    n = p.num_variables

    phase1 = [ZERO] * tableau.width
    for j in range(tableau.first_artificial, tableau.width):
        phase1[j] = -ONE
    tableau.run(phase1, allow_artificial=True)
    infeasibility = sum((tableau.matrix[i][-1] for i, b in enumerate(tableau.basis)
                         if tableau.is_artificial(b)), ZERO)
    if infeasibility > 0:
        logger.debug("phase 1 ended with infeasibility %s after %d pivots",
                     infeasibility, tableau.pivots)
        return LpSolution(LpStatus.INFEASIBLE)
    tableau.drive_out_artificials()

    phase2 = [Fraction(c) for c in p.objective] + [ZERO] * (tableau.width - n)
    if not tableau.run(phase2, allow_artificial=False):
        logger.debug("unbounded after %d pivots", tableau.pivots)
        return LpSolution(LpStatus.UNBOUNDED)
    point = tableau.values()[:n]
    objective = sum((c * x for c, x in zip(phase2, point)), ZERO)
    logger.debug("optimal objective %s after %d pivots", objective, tableau.pivots)
    return LpSolution(
        status=LpStatus.OPTIMAL,
        primal=tuple(point),
        dual=tuple(tableau.row_duals(phase2)),
        objective_value=objective,
        basis=tuple(tableau.basis))


def require_optimal(sol: LpSolution) -> None:
    if not sol.optimal:
        raise StatusError(f"solution status is {sol.status.value}, expected optimal")


def check_integral(sol: LpSolution) -> bool:
    """True iff every primal coordinate is an integer."""
    require_optimal(sol)
    return all(x.denominator == 1 for x in sol.primal)


def reduced_costs(p: LpProblem, dual: Sequence[Fraction]) -> List[Fraction]:
    """c_j - sum_i y_i A_ij for every variable."""
    costs = [Fraction(c) for c in p.objective]
    for y, row in zip(dual, p.rows):
        if not y:
            continue
        for j, a in enumerate(row.coefficients):
            if a:
                costs[j] -= y * a
    return costs


def dual_objective(p: LpProblem, sol: LpSolution) -> Fraction:
    """sum_i y_i b_i."""
    require_optimal(sol)
    return sum((y * row.rhs for y, row in zip(sol.dual, p.rows)), ZERO)


def check_complementary_slackness(p: LpProblem, sol: LpSolution) -> bool:
    """
    Audits complementary slackness exactly.

    Returns:
        bool: True iff every row with a nonzero dual is tight and every
        variable with a nonzero value has zero reduced cost

    Raises:
        StatusError: Solution is not OPTIMAL
    """
    require_optimal(sol)
    for y, row in zip(sol.dual, p.rows):
        if y and row.activity(sol.primal) != row.rhs:
            return False
    for x, d in zip(sol.primal, reduced_costs(p, sol.dual)):
        if x and d:
            return False
    return True


def check_primal_feasible(p: LpProblem, sol: LpSolution) -> bool:
    """True iff the primal point is non-negative and satisfies every row."""
    require_optimal(sol)
    if len(sol.primal) != p.num_variables:
        return False
    return all(x >= 0 for x in sol.primal) and all(row.satisfied_by(sol.primal) for row in p.rows)


def check_dual_feasible(p: LpProblem, sol: LpSolution) -> bool:
    """True iff dual signs match the row relations and no reduced cost is positive."""
    require_optimal(sol)
    if len(sol.dual) != len(p.rows):
        return False
    for y, row in zip(sol.dual, p.rows):
        if (row.relation is Relation.LE and y < 0) or (row.relation is Relation.GE and y > 0):
            return False
    return all(d <= 0 for d in reduced_costs(p, sol.dual))


def integral_vertex_search(p: LpProblem, sol: LpSolution,
                           max_fractional: int = DEFAULT_MAX_FRACTIONAL) -> Optional[LpSolution]:
    """
    Looks for an integral optimum when the returned vertex is fractional.

    Why:
        Under polymatroid constraints an integral optimum exists, yet a
        degenerate pivot sequence can stop on a fractional companion. Each
        fractional coordinate is fixed to its floor or ceiling and the
        problem re-solved; the first integral point of equal value wins.

    Args:
        p: Problem that produced sol
        sol: OPTIMAL solution
        max_fractional: Largest number of fractional coordinates searched

    Returns:
        LpSolution with vertex_search=True and the original duals (still
        optimal for any optimal primal), sol itself if already integral, or
        None when nothing was found or the search was too large

    Raises:
        StatusError: sol is not OPTIMAL
    """
    require_optimal(sol)
    fractional = [j for j, x in enumerate(sol.primal) if x.denominator != 1]
    if not fractional:
        return sol
    if len(fractional) > max_fractional:
        logger.info("vertex search skipped: %d fractional coordinates exceed %d",
                    len(fractional), max_fractional)
        return None
    n = p.num_variables
    for choice in product((False, True), repeat=len(fractional)):
        fixes = []
        for j, up in zip(fractional, choice):
            x = sol.primal[j]
            target = Fraction(x.numerator // x.denominator + (1 if up else 0))
            unit = tuple(ONE if k == j else ZERO for k in range(n))
            fixes.append(LpRow(unit, Relation.EQ, target, f"fix[{p.variable_label(j)}]"))
        candidate = solve_lp(p.with_rows(fixes))
        if (candidate.optimal and candidate.objective_value == sol.objective_value
                and all(x.denominator == 1 for x in candidate.primal)):
            logger.info("vertex search found an integral optimum")
            return LpSolution(LpStatus.OPTIMAL, candidate.primal, sol.dual,
                              sol.objective_value, candidate.basis, vertex_search=True)
    logger.info("vertex search found no integral optimum over %d coordinates", len(fractional))
    return None


def _term(coefficient: Fraction, label: str, first: bool) -> str:
    sign = "-" if coefficient < 0 else ("" if first else "+")
    magnitude = abs(coefficient)
    body = label if magnitude == 1 else f"{format_rational(magnitude)} {label}"
    return f"{sign} {body}".strip() if first else f"{sign} {body}"


def format_problem(p: LpProblem) -> str:
    """Readable listing of a problem, one row per line."""
    def expression(coefficients: Sequence[Fraction]) -> str:
        terms = [(c, p.variable_label(j)) for j, c in enumerate(coefficients) if c]
        if not terms:
            return "0"
        return " ".join(_term(c, label, i == 0) for i, (c, label) in enumerate(terms))

    lines = [f"maximize {expression(p.objective)}", "subject to"]
    for i, row in enumerate(p.rows):
        lines.append(f"  {p.row_label(i)}: {expression(row.coefficients)} "
                     f"{row.relation.value} {format_rational(row.rhs)}")
    lines.append(f"  all {p.num_variables} variables >= 0")
    return "\n".join(lines) + "\n"
