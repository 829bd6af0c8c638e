"""Command-line front end: ``python main.py <command> ...``."""

import argparse
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from approx.power_attack import power_attack
from arith.scalar import Rational
from attacks.density import density_diag
from attacks.irrational import DEFAULT_MAX_K, attack_irrational
from attacks.rational import DEFAULT_Z_MAX, attack_rational
from cli.genspec import parse_genspec, parse_scalar
from cli.serialize import (
    ReportRenderer,
    alpha_certificate_dict,
    element_entry,
    gap_certificate_dict,
    gap_report_dict,
    power_result_dict,
    system_dict,
    witness_dict,
)
from constructions.certificates import (
    Example1Certifier,
    Example2Certifier,
    QuadCertifier,
    certify_pairs,
    smallest_gap_pairs,
)
from constructions.systems import Example1System, Example2System, QuadAlphaSystem
from core.config import Settings
from core.errors import BeurlingError, CertificationError, DomainError, NotFoundError, PreconditionError
from core.gaps import gap_report
from core.logger import setup_logger
from core.semigroup import enumerate_semigroup
from core.setup.system_builder import SystemBuilder, generator_set_of
from metric.finder import DEFAULT_MAX_T, DEFAULT_SAFETY, find_alpha
from models.report import RunReport
from primeset.sieve import ExcludedSet

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_NOT_FOUND = 2
EXIT_PRECONDITION = 3
EXIT_CERTIFICATION = 4
EXIT_UNRESOLVED = 5

# handler result: payload, csv rows, unresolved count
Outcome = Tuple[Dict[str, Any], List[Dict[str, str]], int]


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _excluded(text: str) -> ExcludedSet:
    if not text.strip():
        return ExcludedSet()
    try:
        return ExcludedSet.of(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}: {exc}") from exc


def _cmd_enumerate(args, budget: Optional[int]) -> Outcome:
    generators = generator_set_of(parse_genspec(args.gen).build(budget))
    stream = enumerate_semigroup(generators, args.limit, budget)
    elements = [element_entry(e, args.digits, budget) for e in stream]
    rows = [
        {"index": str(i), "exponents": e["exponents"], "value": e["decimal"], "error": e["error"]}
        for i, e in enumerate(elements)
    ]
    unresolved = len(stream.unresolved)
    result = {
        "generators": generators.label,
        "limit": str(args.limit),
        "count": len(elements),
        "elements": elements,
        "collisions": len(stream.collisions),
    }
    return result, rows, unresolved


def _cmd_gaps(args, budget: Optional[int]) -> Outcome:
    generators = generator_set_of(parse_genspec(args.gen).build(budget))
    report = gap_report(generators, args.limit, args.delta, budget)
    rows = [
        {"floor_log2": "zero" if k is None else str(k), "pairs": str(v)}
        for k, v in sorted(report.histogram.items(), key=lambda kv: (kv[0] is None, kv[0] or 0))
    ]
    return gap_report_dict(report), rows, report.unresolved_count


def _certifier_for(system, budget: Optional[int]):
    if isinstance(system, QuadAlphaSystem):
        return QuadCertifier(system, budget)
    if isinstance(system, Example1System):
        return Example1Certifier(system, budget)
    if isinstance(system, Example2System):
        return Example2Certifier(system, budget)
    raise PreconditionError("pair certificates exist only for quadalpha, example1 and example2 systems")


def _cmd_construct(args, budget: Optional[int]) -> Outcome:
    builder = SystemBuilder(budget)
    if args.family == "quadalpha":
        system = builder.quad_alpha(args.a, args.b, args.q, args.limit)
    elif args.family == "example1":
        system = builder.example1(args.limit)
    elif args.family == "example2":
        system = builder.example2(args.limit)
    else:
        system = builder.cpow(args.c, args.limit)
    result = {"system": system_dict(system, args.digits, budget)}
    rows: List[Dict[str, str]] = []
    unresolved = 0
    if args.certify_pairs:
        certifier = _certifier_for(system, budget)
        pair_limit = args.pair_limit if args.pair_limit is not None else args.limit
        pairs = smallest_gap_pairs(generator_set_of(system), pair_limit, args.certify_pairs, budget)
        certificates = [gap_certificate_dict(c) for c in certify_pairs(certifier, pairs)]
        result["certificates"] = certificates
        rows = [
            {"left": c["left"], "right": c["right"], "bound_lower": c["bound"][0], "passes": str(c["passes"])}
            for c in certificates
        ]
    return result, rows, unresolved


def _cmd_attack(args, budget: Optional[int]) -> Outcome:
    if args.kind == "cpow":
        result = power_attack(
            parse_scalar(args.alpha), args.c, args.eps, args.bmax, args.intermediates, args.exhaustive, budget
        )
        payload = power_result_dict(result)
        return payload, [{"a": payload["best"]["a"], "b": payload["best"]["b"], "residual_upper": payload["best"]["residual"][1]}], 0

    diag = density_diag(args.exclude)
    if args.kind == "rational":
        alpha = _fraction(args.alpha)
        if alpha.denominator == 1:
            raise PreconditionError(f"alpha = {alpha} is an integer")
        witness = attack_rational(
            args.exclude, alpha.numerator, alpha.denominator, args.delta,
            z_max=args.z_max, threshold=args.threshold, workers=args.workers,
        )
    else:
        alpha = parse_scalar(args.alpha)
        if isinstance(alpha, Rational):
            raise PreconditionError(f"alpha = {alpha} is rational; use 'attack rational'")
        witness = attack_irrational(
            args.exclude, alpha, args.delta,
            max_k=args.max_k, threshold=args.threshold, workers=args.workers, budget=budget,
        )
    payload = witness_dict(witness)
    payload["density"] = {
        "eta": str(diag.eta),
        "eta_prime": str(diag.eta_prime),
        "case1_eta": str(diag.case1_eta),
        "suggested_t": diag.suggested_t,
        "search_budget": diag.search_budget,
    }
    rows = [{"n_prime": payload["n_prime"], "m_prime": payload["m_prime"], "gap_upper": payload["gap"][1]}]
    return payload, rows, 0


def _cmd_metric(args, budget: Optional[int]) -> Outcome:
    generators = generator_set_of(parse_genspec(args.gen).build(budget)) if args.gen else None
    certificate = find_alpha(
        generators, args.delta, args.verify,
        cutoff=args.cutoff, max_t=args.max_t, safety=args.safety, budget=budget,
    )
    payload = alpha_certificate_dict(certificate)
    rows = [{"lo": lo, "hi": hi} for lo, hi in payload["survivors"]]
    return payload, rows, int(certificate.empirical.get("unresolved", 0))


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors become precondition failures so they land in the report."""

    def error(self, message: str):
        raise PreconditionError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="beurling", description="Lacunary Beurling integer systems")
    parser.add_argument("--max-precision-bits", type=int, default=None)
    parser.add_argument("--format", choices=("json", "csv", "text"), default="json")
    parser.add_argument("--digits", type=int, default=20)
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("enumerate", help="sorted elements of the semigroup up to a bound")
    p.add_argument("--gen", required=True)
    p.add_argument("--limit", type=_fraction, required=True)
    p.set_defaults(handler=_cmd_enumerate)

    p = commands.add_parser("gaps", help="consecutive gap report")
    p.add_argument("--gen", required=True)
    p.add_argument("--limit", type=_fraction, required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.set_defaults(handler=_cmd_gaps)

    p = commands.add_parser("construct", help="build a lacunary construction and certify pairs")
    families = p.add_subparsers(dest="family", required=True)
    for name in ("quadalpha", "example1", "example2", "cpow"):
        f = families.add_parser(name)
        f.add_argument("--limit", type=int, required=True)
        f.add_argument("--certify-pairs", type=int, default=0)
        f.add_argument("--pair-limit", type=_fraction, default=None)
        if name == "quadalpha":
            f.add_argument("--a", type=int, default=1)
            f.add_argument("--b", type=int, default=1)
            f.add_argument("--q", type=int, default=2)
        if name == "cpow":
            f.add_argument("--c", type=_fraction, required=True)
    p.set_defaults(handler=_cmd_construct)

    p = commands.add_parser("attack", help="search for two elements closer than delta")
    kinds = p.add_subparsers(dest="kind", required=True)
    for name in ("rational", "irrational"):
        k = kinds.add_parser(name)
        k.add_argument("--alpha", required=True)
        k.add_argument("--exclude", type=_excluded, default=ExcludedSet())
        k.add_argument("--delta", type=_fraction, required=True)
        k.add_argument("--threshold", type=int, default=None)
        k.add_argument("--workers", type=int, default=1)
        if name == "rational":
            k.add_argument("--z-max", type=int, default=DEFAULT_Z_MAX)
        else:
            k.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    k = kinds.add_parser("cpow")
    k.add_argument("--alpha", required=True)
    k.add_argument("--c", type=_fraction, required=True)
    k.add_argument("--eps", type=_fraction, required=True)
    k.add_argument("--bmax", type=int, required=True)
    k.add_argument("--intermediates", action="store_true")
    k.add_argument("--exhaustive", action="store_true")
    p.set_defaults(handler=_cmd_attack)

    p = commands.add_parser("metric", help="measure-theoretic choice of a new generator")
    actions = p.add_subparsers(dest="action", required=True)
    f = actions.add_parser("find-alpha")
    f.add_argument("--gen", default=None)
    f.add_argument("--delta", type=_fraction, required=True)
    f.add_argument("--verify", type=int, required=True)
    f.add_argument("--cutoff", type=int, default=None)
    f.add_argument("--max-t", type=int, default=DEFAULT_MAX_T)
    f.add_argument("--safety", type=int, default=DEFAULT_SAFETY)
    p.set_defaults(handler=_cmd_metric)
    return parser


def _config(args, settings: Settings) -> Dict[str, Any]:
    config = {"max_precision_bits": settings.max_precision_bits}
    for key, value in sorted(vars(args).items()):
        if key in ("handler", "max_precision_bits"):
            continue
        if isinstance(value, ExcludedSet):
            value = [str(p) for p in value]
        elif isinstance(value, Fraction):
            value = str(value)
        config[key] = value
    return config


def _exit_code_for(exc: BeurlingError) -> int:
    if isinstance(exc, NotFoundError):
        return EXIT_NOT_FOUND
    if isinstance(exc, CertificationError):
        return EXIT_CERTIFICATION
    if isinstance(exc, (DomainError, PreconditionError)):
        return EXIT_PRECONDITION
    return EXIT_CERTIFICATION


def _error_payload(exc: Exception) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NotFoundError):
        payload["diagnostics"] = exc.diagnostics
    if isinstance(exc, CertificationError):
        payload["trace"] = exc.trace
    if hasattr(exc, "position"):
        payload["position"] = exc.position
    return payload


def execute(argv: Sequence[str]) -> RunReport:
    """Parse ``argv``, run the command and return the filled report."""
    try:
        args = build_parser().parse_args(list(argv))
    except PreconditionError as exc:
        logger.error("Bad command line: %s", exc)
        return RunReport(command=list(argv), error=_error_payload(exc), exit_code=EXIT_PRECONDITION)
    settings = Settings.from_env(args.max_precision_bits)
    budget = settings.max_precision_bits
    report = RunReport(command=list(argv), config=_config(args, settings))
    started = time.perf_counter()
    try:
        result, rows, unresolved = args.handler(args, budget)
        report.result = result
        report.rows = rows
        report.unresolved_count = unresolved
        report.exit_code = EXIT_UNRESOLVED if unresolved else EXIT_OK
    except BeurlingError as exc:
        logger.error("%s failed: %s", args.command, exc)
        report.error = _error_payload(exc)
        report.exit_code = _exit_code_for(exc)
    except Exception as exc:
        # anything outside the error hierarchy is an internal failure; still emit a report
        logger.exception("%s failed unexpectedly", args.command)
        report.error = _error_payload(exc)
        report.exit_code = EXIT_CERTIFICATION
    report.timing_seconds = time.perf_counter() - started
    logger.info("%s finished with exit code %d in %.3fs", args.command, report.exit_code, report.timing_seconds)
    return report


def run(argv: Sequence[str]) -> int:
    report = execute(argv)
    fmt = report.config.get("format", "json")
    sys.stdout.write(ReportRenderer().render(report, fmt))
    return report.exit_code
