"""
commands.py

Command-line entry point: reads instance and arrangement documents, runs
one command and writes a JSON document to standard output (or --output).
Diagnostics go to standard error through cli.debug_logger.

Exit codes:
    0  success
    1  reproduce: some expectation failed
    2  invalid input (document, settings, flags, unsupported mode)
    3  no stable arrangement found
    4  fractional LP optimum under constraints outside the integral classes
    5  enumeration cap exceeded
"""

import argparse
from dataclasses import dataclass, field
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import toml

from app import DOCUMENT_VERSION, version_banner
from app.assignment_lp import FractionalReport, solve_assignment_lp
from app.config import load_settings, validate_and_update_setting
from app.constraints import is_generalized_polymatroid, is_polymatroid
from app.errors import CapExceeded, NoFeasibleAssignment, PreconditionError, QuotaMatchError
from app.fixtures import FIXTURE_NAMES, load_fixture, run_expectations
from app.market import MarketInstance, PreferenceMode, parse_instance, parse_rational
from app.one_firm import solve_one_firm
from app.rational_lp import format_problem
from app.stability import (brute_force_efficient, check_efficient, check_r_efficient, check_r_stable,
                           check_stable, compute_payoffs, demand_correspondence, stable_exists)
from . import debug_logger
from . import documents

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NO_STABLE = 3
EXIT_FRACTIONAL = 4
EXIT_CAP = 5

COMMANDS = ("validate", "analyze", "solve", "check", "demand", "exists", "oracle",
            "reproduce", "fixtures")
R_MODE_COMMANDS = ("solve", "check", "oracle")

Document = Dict[str, Any]
Outcome = Tuple[int, Document]


@dataclass(frozen=True)
class RunConfig:
    """One command invocation with its inputs, caps and flags."""
    command: str
    instance_path: Optional[str] = None
    arrangement_path: Optional[str] = None
    fixture: Optional[str] = None
    firm: Optional[str] = None
    salaries: Tuple[str, ...] = ()
    enum_cap: int = 2 ** 20
    assign_cap: int = 10 ** 7
    output: Optional[str] = None
    r_mode: bool = False
    dump_lp: bool = False
    fallback: bool = True
    max_fractional: int = 12
    one_firm: bool = False
    dump_stream: Any = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise PreconditionError(f"unknown command {self.command!r}")
        if self.enum_cap <= 0 or self.assign_cap <= 0:
            raise PreconditionError("enumeration caps must be positive")
        if self.r_mode and self.command not in R_MODE_COMMANDS:
            raise PreconditionError(f"--r-mode is only valid for {', '.join(R_MODE_COMMANDS)}")


def _read(path: Optional[str], what: str) -> bytes:
    if path is None:
        raise PreconditionError(f"missing {what} path")
    with open(path, 'rb') as f:
        return f.read()


def _instance(config: RunConfig) -> MarketInstance:
    return parse_instance(_read(config.instance_path, "instance"))


def _flag(check: Callable[[], bool], name: str) -> Optional[bool]:
    """Runs a verification; a cap refusal leaves the flag unknown."""
    try:
        return check()
    except CapExceeded as exc:
        logger.warning("%s not verified: %s", name, exc)
        return None


def _integral_class(inst: MarketInstance, r_mode: bool) -> Optional[str]:
    """Name of the integral constraint class every firm belongs to, if any."""
    test = is_generalized_polymatroid if r_mode else is_polymatroid
    if all(test(inst.family(f)).holds for f in inst.firms):
        return "generalized_polymatroid" if r_mode else "polymatroid"
    return None


def _certify(config: RunConfig, inst: MarketInstance, arr, lp=None) -> Outcome:
    """
    Verifies a computed arrangement and wraps it in a certificate.

    Both stability notions are always reported; the exit code follows the
    one the chosen mode guarantees. Without an LP the integral flag is
    vacuous and a note says so.
    """
    efficient_check = check_r_efficient if config.r_mode else check_efficient
    flags = {
        "integral": True,
        "stable": _flag(lambda: check_stable(inst, arr, config.enum_cap).stable, "stability"),
        "r_stable": _flag(lambda: check_r_stable(inst, arr, config.enum_cap).stable, "r-stability"),
        "efficient": _flag(lambda: efficient_check(inst, arr.assignment, config.assign_cap,
                                                   config.enum_cap), "efficiency"),
    }
    doc = documents.certificate_document(inst, arr, compute_payoffs(inst, arr), flags, lp)
    if lp is None:
        doc["notes"] = {"integral": "vacuous: built directly, no LP was solved"}
    guaranteed = flags["r_stable" if config.r_mode else "stable"]
    return (EXIT_NO_STABLE if guaranteed is False else EXIT_OK), doc


def _solve(config: RunConfig) -> Outcome:
    inst = _instance(config)
    general = inst.preference_mode is PreferenceMode.GENERAL
    if config.one_firm or (general and len(inst.firms) == 1):
        arr = solve_one_firm(inst, config.enum_cap, config.r_mode)
        return _certify(config, inst, arr)
    result = solve_assignment_lp(inst, config.r_mode, config.fallback, config.max_fractional)
    if config.dump_lp:
        stream = config.dump_stream if config.dump_stream is not None else sys.stderr
        stream.write(format_problem(result.artifacts.problem))
    if isinstance(result.outcome, FractionalReport):
        constraint_class = _integral_class(inst, config.r_mode)
        doc = documents.fractional_document(result.outcome, constraint_class or "other")
        if constraint_class is None:
            logger.error("fractional LP optimum; constraints are outside the integral classes")
            return EXIT_FRACTIONAL, doc
        logger.error("fractional LP optimum and no integral vertex found")
        return EXIT_NO_STABLE, doc
    return _certify(config, inst, result.arrangement, result)


def _validate(config: RunConfig) -> Outcome:
    inst = _instance(config)
    return EXIT_OK, {"version": DOCUMENT_VERSION, "valid": True, "mode": inst.preference_mode.value,
                     "workers": list(inst.workers), "firms": list(inst.firms)}


def _analyze(config: RunConfig) -> Outcome:
    return EXIT_OK, documents.structure_report(_instance(config), config.enum_cap)


def _check(config: RunConfig) -> Outcome:
    inst = _instance(config)
    arr = documents.parse_arrangement(inst, _read(config.arrangement_path, "arrangement"))
    verdict = (check_r_stable if config.r_mode else check_stable)(inst, arr, config.enum_cap)
    doc = documents.verdict_document(inst, verdict, compute_payoffs(inst, arr), config.r_mode)
    return (EXIT_OK if verdict.stable else EXIT_NO_STABLE), doc


def _parse_salaries(pairs: Sequence[str]) -> Dict[str, Any]:
    salaries = {}
    for pair in pairs:
        worker, sep, value = pair.partition("=")
        if not sep or not worker:
            raise PreconditionError(f"salary {pair!r} is not of the form WORKER=VALUE")
        salaries[worker] = parse_rational(value)
    return salaries


def _demand(config: RunConfig) -> Outcome:
    inst = _instance(config)
    if config.firm is None:
        raise PreconditionError("demand needs --firm")
    salaries = _parse_salaries(config.salaries)
    demanded = demand_correspondence(inst, config.firm, salaries, config.enum_cap)
    return EXIT_OK, {"version": DOCUMENT_VERSION, "firm": config.firm,
                     "demand": [inst.ordered(s) for s in demanded]}


def _exists(config: RunConfig) -> Outcome:
    inst = _instance(config)
    verdict = stable_exists(inst, config.assign_cap, config.enum_cap)
    payoffs = compute_payoffs(inst, verdict.witness) if verdict.witness is not None else None
    doc = documents.existence_document(inst, verdict, payoffs)
    return (EXIT_OK if verdict.exists else EXIT_NO_STABLE), doc


def _oracle(config: RunConfig) -> Outcome:
    inst = _instance(config)
    result = brute_force_efficient(inst, config.assign_cap, config.r_mode, config.enum_cap)
    return EXIT_OK, documents.efficiency_document(inst, result)


def _reproduce(config: RunConfig) -> Outcome:
    if config.fixture is None:
        raise PreconditionError("reproduce needs a fixture name")
    fixture = load_fixture(config.fixture)
    results = run_expectations(fixture)
    for r in results:
        logger.info("%s %s", "PASS" if r.passed else "FAIL", r.description)
    doc = documents.reproduction_document(fixture.name, fixture.description, results)
    return (EXIT_OK if doc["passed"] else EXIT_FAILED), doc


def _fixtures(config: RunConfig) -> Outcome:
    listing = [{"name": name, "source": load_fixture(name).description} for name in FIXTURE_NAMES]
    return EXIT_OK, {"version": DOCUMENT_VERSION, "fixtures": listing}


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "validate": _validate,
    "analyze": _analyze,
    "solve": _solve,
    "check": _check,
    "demand": _demand,
    "exists": _exists,
    "oracle": _oracle,
    "reproduce": _reproduce,
    "fixtures": _fixtures,
}


def _error(code: int, exc: BaseException) -> Outcome:
    logger.error("%s: %s", type(exc).__name__, exc)
    return code, {"version": DOCUMENT_VERSION, "error": {"kind": type(exc).__name__, "message": str(exc)}}


def run(config: RunConfig) -> Outcome:
    """
    Dispatches one command and maps failures to exit codes.

    Args:
        config: Validated invocation

    Returns:
        (exit code, output document); failures produce an error document

    Example:
        >>> run(RunConfig("reproduce", fixture="appB2-nonunique"))[0]
        0
    """
    try:
        return HANDLERS[config.command](config)
    except CapExceeded as exc:
        return _error(EXIT_CAP, exc)
    except NoFeasibleAssignment as exc:
        return _error(EXIT_NO_STABLE, exc)
    except (QuotaMatchError, OSError) as exc:
        return _error(EXIT_INVALID, exc)


# --- argument parsing ---

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--enum-cap", help="largest 2^|W| for feasible-set enumeration")
    common.add_argument("--assign-cap", help="largest (|F|+1)^|W| for assignment enumeration")
    common.add_argument("--config", help="settings file (default: quotamatch.toml if present)")
    common.add_argument("--output", help="write the document here instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG")
    common.add_argument("--quiet", action="store_true", help="log errors only")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="quotamatch",
                                     description="Stable arrangements in matching markets "
                                                 "with hiring quotas")
    parser.add_argument("--version", action="version", version=version_banner())
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("validate", "parse and validate an instance"),
                       ("analyze", "classify each firm's constraint structure"),
                       ("exists", "decide whether a stable arrangement exists")):
        sub.add_parser(name, parents=[common], help=text).add_argument("instance")

    solve = sub.add_parser("solve", parents=[common], help="compute a stable arrangement")
    solve.add_argument("instance")
    solve.add_argument("--one-firm", action="store_true", help="direct one-firm construction")
    solve.add_argument("--r-mode", action="store_true", help="lower quotas, r-stability")
    solve.add_argument("--no-fallback", action="store_true", help="disable integral vertex search")
    solve.add_argument("--dump-lp", action="store_true", help="print the LP to standard error")

    check = sub.add_parser("check", parents=[common], help="check an arrangement for stability")
    check.add_argument("instance")
    check.add_argument("arrangement")
    check.add_argument("--r-mode", action="store_true", help="check r-stability")

    demand = sub.add_parser("demand", parents=[common], help="a firm's demand at given salaries")
    demand.add_argument("instance")
    demand.add_argument("--firm", required=True)
    demand.add_argument("--salary", action="append", default=[], metavar="WORKER=VALUE")

    oracle = sub.add_parser("oracle", parents=[common], help="brute-force efficient assignments")
    oracle.add_argument("instance")
    oracle.add_argument("--r-mode", action="store_true", help="r-feasible assignments only")

    reproduce = sub.add_parser("reproduce", parents=[common], help="run a fixture's expectations")
    reproduce.add_argument("fixture")

    sub.add_parser("fixtures", parents=[common], help="list registered fixtures")
    return parser


def _settings(args: argparse.Namespace) -> Dict[str, Any]:
    """Settings file overlaid with command-line flags."""
    settings = load_settings(args.config)
    for name in ("enum_cap", "assign_cap"):
        value = getattr(args, name)
        if value is not None:
            ok, message = validate_and_update_setting(name, value, settings)
            if not ok:
                raise PreconditionError(message)
            logger.debug(message)
    if getattr(args, "no_fallback", False):
        settings["fallback_vertex_search"] = False
    if args.verbose:
        settings["log_level"] = "DEBUG"
    elif args.quiet:
        settings["log_level"] = "ERROR"
    return settings


def config_from_args(args: argparse.Namespace, settings: Dict[str, Any]) -> RunConfig:
    return RunConfig(
        command=args.command,
        instance_path=getattr(args, "instance", None),
        arrangement_path=getattr(args, "arrangement", None),
        fixture=getattr(args, "fixture", None),
        firm=getattr(args, "firm", None),
        salaries=tuple(getattr(args, "salary", ())),
        enum_cap=settings["enum_cap"],
        assign_cap=settings["assign_cap"],
        output=args.output,
        r_mode=getattr(args, "r_mode", False),
        dump_lp=getattr(args, "dump_lp", False),
        fallback=settings["fallback_vertex_search"],
        max_fractional=settings["max_fractional"],
        one_firm=getattr(args, "one_firm", False),
    )


def _write(doc: Document, output: Optional[str]) -> None:
    text = documents.dumps(doc)
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, 'w', encoding='utf-8') as f:
        f.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    """Parses arguments, runs the command and writes its document; returns the exit code."""
    args = build_parser().parse_args(argv)
    debug_logger.configure('DEBUG' if args.verbose else 'ERROR' if args.quiet else 'WARN')
    try:
        settings = _settings(args)
        config = config_from_args(args, settings)
    except (QuotaMatchError, OSError, toml.TomlDecodeError) as exc:
        code, doc = _error(EXIT_INVALID, exc)
        _write(doc, args.output)
        return code
    debug_logger.configure(settings["log_level"])
    code, doc = run(config)
    try:
        _write(doc, config.output)
    except OSError as exc:
        logger.error("cannot write %s: %s", config.output, exc)
        return EXIT_INVALID
    return code
