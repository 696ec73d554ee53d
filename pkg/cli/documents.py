"""
documents.py

Arrangement input documents and the JSON documents the commands print:
certificates, verdicts, structure reports and efficiency results. Every
rational is written exactly (decimal when finite, else "p/q").
"""

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, StrictInt, StrictStr, ValidationError

from app import DOCUMENT_VERSION
from app.assignment_lp import FractionalReport, PipelineResult
from app.constraints import (StructureVerdict, enumerate_feasible_sets, is_generalized_polymatroid,
                             is_hierarchy, is_intersecting_family, is_polymatroid)
from app.errors import SchemaError
from app.fixtures import ExpectationResult
from app.market import (Arrangement, Assignment, MarketInstance, PayoffVector, format_rational,
                        parse_rational)
from app.stability import (BlockingCoalition, EfficiencyResult, ExistenceVerdict, FirmIRViolated,
                           NotFeasible, StabilityVerdict, WorkerIRViolated)


class ArrangementDoc(BaseModel):
    """Arrangement input; extra fields are ignored so certificates can be fed back."""
    model_config = ConfigDict(extra="ignore")
    version: StrictInt
    assignment: Dict[StrictStr, Optional[StrictStr]]
    salaries: Dict[StrictStr, Dict[StrictStr, StrictStr | StrictInt]]


def parse_arrangement(inst: MarketInstance, text: str | bytes) -> Arrangement:
    """
    Parses an arrangement (or certificate) document against an instance.

    Raises:
        SchemaError: Malformed document or a salary matrix that is not total
        UnknownAgentError: Assignment or salaries name undeclared agents
        InstanceValueError: A salary is not a decimal or "p/q" string
    """
    try:
        doc = ArrangementDoc.model_validate(json.loads(text))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError(f"not a JSON document: {exc}") from exc
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc
    if doc.version != DOCUMENT_VERSION:
        raise SchemaError(f"unsupported document version {doc.version}")
    inst.require_workers(doc.assignment.keys())
    for firm in doc.assignment.values():
        if firm is not None:
            inst.require_firm(firm)
    for firm, row in doc.salaries.items():
        inst.require_firm(firm)
        inst.require_workers(row.keys())
    salaries = {}
    for firm in inst.firms:
        row = doc.salaries.get(firm, {})
        missing = [w for w in inst.workers if w not in row]
        if missing:
            raise SchemaError(f"salaries of {firm!r} miss workers {missing}")
        salaries[firm] = {w: parse_rational(row[w]) for w in inst.workers}
    assigned = {w: doc.assignment.get(w) for w in inst.workers}
    return Arrangement(Assignment(assigned), salaries)


def assignment_document(inst: MarketInstance, X: Assignment) -> Dict[str, Optional[str]]:
    return {w: X.firm_of(w) for w in inst.workers}


def payoff_document(inst: MarketInstance, pv: PayoffVector) -> Dict[str, Dict[str, str]]:
    return {
        "workers": {w: format_rational(pv.worker_payoffs[w]) for w in inst.workers},
        "firms": {f: format_rational(pv.firm_payoffs[f]) for f in inst.firms},
    }


def arrangement_document(inst: MarketInstance, arr: Arrangement) -> Dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "assignment": assignment_document(inst, arr.assignment),
        "salaries": {f: {w: format_rational(arr.salary(w, f)) for w in inst.workers}
                     for f in inst.firms},
    }


def certificate_document(inst: MarketInstance, arr: Arrangement, payoffs: PayoffVector,
                         flags: Dict[str, Optional[bool]],
                         lp: Optional[PipelineResult] = None) -> Dict[str, Any]:
    """Arrangement plus payoffs, LP objective and duals (when the LP ran) and flags."""
    doc = arrangement_document(inst, arr)
    doc["payoffs"] = payoff_document(inst, payoffs)
    if lp is not None:
        problem = lp.artifacts.problem
        doc["lp_objective"] = format_rational(lp.solution.objective_value)
        doc["duals"] = {problem.row_label(i): format_rational(y)
                        for i, y in enumerate(lp.solution.dual)}
    else:
        doc["lp_objective"] = None
        doc["duals"] = {}
    doc["flags"] = flags
    return doc


def fractional_document(report: FractionalReport, constraint_class: str) -> Dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "integral": False,
        "lp_objective": format_rational(report.objective_value),
        "fractional": [{"worker": w, "firm": f, "value": format_rational(x)}
                       for w, f, x in report.coordinates],
        "constraints": constraint_class,
    }


def failure_document(inst: MarketInstance, verdict: StabilityVerdict) -> Optional[Dict[str, Any]]:
    failure = verdict.failure
    if failure is None:
        return None
    if isinstance(failure, NotFeasible):
        return {"kind": "not_feasible", "firm": failure.firm, "detail": failure.detail}
    if isinstance(failure, WorkerIRViolated):
        return {"kind": "worker_ir", "worker": failure.worker,
                "payoff": format_rational(failure.payoff)}
    if isinstance(failure, FirmIRViolated):
        return {"kind": "firm_ir", "firm": failure.firm, "payoff": format_rational(failure.payoff)}
    if isinstance(failure, BlockingCoalition):
        return {"kind": "blocking_coalition", "firm": failure.firm,
                "workers": inst.ordered(failure.workers),
                "deficit": format_rational(failure.deficit)}
    raise TypeError(f"unexpected failure {failure!r}")


def verdict_document(inst: MarketInstance, verdict: StabilityVerdict, payoffs: PayoffVector,
                     r_mode: bool) -> Dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "notion": "r-stable" if r_mode else "stable",
        "stable": verdict.stable,
        "failure": failure_document(inst, verdict),
        "payoffs": payoff_document(inst, payoffs),
    }


def _structure(inst: MarketInstance, verdict: StructureVerdict) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"status": verdict.status.value}
    if verdict.witness:
        doc["witness"] = [inst.ordered(s) for s in verdict.witness]
    if verdict.reason:
        doc["reason"] = verdict.reason
    return doc


def structure_report(inst: MarketInstance, enum_cap: int) -> Dict[str, Any]:
    """Per-firm structure classification and feasible-set count."""
    firms = {}
    for f in inst.firms:
        family = inst.family(f)
        firms[f] = {
            "entries": len(family),
            "hierarchy": _structure(inst, is_hierarchy(family)),
            "intersecting": _structure(inst, is_intersecting_family(family)),
            "polymatroid": _structure(inst, is_polymatroid(family)),
            "generalized_polymatroid": _structure(inst, is_generalized_polymatroid(family)),
            "lower_quotas": family.has_lower_bounds(),
            "feasible_sets": len(enumerate_feasible_sets(inst, f, enum_cap)),
        }
    return {"version": DOCUMENT_VERSION, "mode": inst.preference_mode.value, "firms": firms}


def efficiency_document(inst: MarketInstance, result: EfficiencyResult) -> Dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "r_mode": result.r_mode,
        "value": format_rational(result.value),
        "assignments": [assignment_document(inst, X) for X in result.assignments],
    }


def existence_document(inst: MarketInstance, verdict: ExistenceVerdict,
                       payoffs: Optional[PayoffVector]) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"version": DOCUMENT_VERSION, "exists": verdict.exists,
                           "obstruction": list(verdict.obstruction)}
    if verdict.witness is not None:
        doc["witness"] = arrangement_document(inst, verdict.witness)
        doc["witness"]["payoffs"] = payoff_document(inst, payoffs)
    return doc


def dumps(doc: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(doc, indent=2) + "\n"


def reproduction_document(name: str, description: str, results: List[ExpectationResult]) -> Dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "fixture": name,
        "source": description,
        "passed": all(r.passed for r in results),
        "expectations": [{"description": r.description, "passed": r.passed,
                          "expected": r.expected, "observed": r.observed} for r in results],
    }
