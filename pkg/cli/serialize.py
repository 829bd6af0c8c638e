"""JSON, CSV and text renderings of run reports.

JSON is the canonical form: sorted keys, big integers and rationals as
strings, intervals as [lower, upper] decimal strings rounded outward.
CSV and text are rendered from jinja2 templates.
"""

import json
import math
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from jinja2 import Environment, FileSystemLoader

from approx.power_attack import PowerAttackResult, PowerCandidate
from arith.compare import format_scaled, to_decimal
from arith.interval import Interval
from arith.scalar import RealScalar
from constructions.systems import Example1System, Example2System, QuadAlphaSystem
from core.gaps import GapPair, GapReport
from core.logger import setup_logger
from core.semigroup import Element, GeneratorSet, UnresolvedComparison
from models.certificate import AlphaCertificate, GapCertificate
from models.report import RunReport
from models.witness import Witness

logger = setup_logger(__name__)

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "templates")
INTERVAL_DIGITS = 20
# integers beyond this magnitude lose precision as JSON numbers
_SAFE_INT = 2 ** 53


def interval_pair(interval: Optional[Interval], digits: int = INTERVAL_DIGITS) -> Optional[List[str]]:
    """[lower, upper] with ``digits`` decimals, rounded outward."""
    if interval is None:
        return None
    if not interval.is_finite:
        return ["-inf", "inf"]
    scale = 10 ** digits
    lo = math.floor(interval.lower * scale)
    hi = math.ceil(interval.upper * scale)
    return [format_scaled(lo, digits), format_scaled(hi, digits)]


def error_bound(error: Fraction) -> str:
    """Smallest power of ten that is >= error, as text."""
    if error <= 0:
        return "0"
    k = len(str(error.numerator)) - len(str(error.denominator))
    while Fraction(10) ** k < error:
        k += 1
    while Fraction(10) ** (k - 1) >= error:
        k -= 1
    return f"1e{k}"


def jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return value if abs(value) < _SAFE_INT else str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Interval):
        return interval_pair(value)
    if isinstance(value, RealScalar):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def scalar_entry(value: RealScalar, digits: int, budget: Optional[int] = None) -> Dict[str, Any]:
    decimal = to_decimal(value, digits, budget)
    return {"expr": str(value), "decimal": decimal.text, "error": error_bound(decimal.error), "certified": decimal.certified}


def element_entry(element: Element, digits: int, budget: Optional[int] = None) -> Dict[str, Any]:
    entry = {"exponents": str(element.exponents)}
    entry.update(scalar_entry(element.value, digits, budget))
    return entry


def generator_set_dict(generators: Optional[GeneratorSet], digits: int, budget: Optional[int] = None) -> Dict[str, Any]:
    if generators is None:
        return {"label": None, "count": 0, "generators": [], "certified_order": True}
    return {
        "label": generators.label,
        "count": len(generators),
        "certified_order": generators.certified_order,
        "generators": [scalar_entry(g, digits, budget) for g in generators],
    }


def _pair(pair: GapPair) -> Dict[str, Any]:
    return {"lower": str(pair.lower.exponents), "upper": str(pair.upper.exponents), "gap": interval_pair(pair.gap)}


def _unresolved(item: UnresolvedComparison) -> Dict[str, Any]:
    return {
        "left": str(item.left.exponents),
        "right": str(item.right.exponents) if item.right is not None else None,
        "precision": item.precision,
        "context": item.context,
    }


def gap_report_dict(report: GapReport) -> Dict[str, Any]:
    histogram = sorted(report.histogram.items(), key=lambda kv: (kv[0] is None, kv[0] if kv[0] is not None else 0))
    return {
        "limit": str(report.limit),
        "delta": str(report.delta),
        "count": report.count,
        "min_gap": interval_pair(report.min_gap),
        "argmin": [str(e.exponents) for e in report.argmin] if report.argmin else None,
        "histogram": [{"floor_log2": k, "pairs": v} for k, v in histogram],
        "violations": [_pair(p) for p in report.violations],
        "unresolved": [_pair(p) for p in report.unresolved],
        "unresolved_comparisons": [_unresolved(u) for u in report.unresolved_comparisons],
        "collisions": [[str(a.exponents), str(b.exponents)] for a, b in report.collisions],
        "is_lacunary": report.is_lacunary,
    }


def witness_dict(witness: Witness) -> Dict[str, Any]:
    return {
        "case": witness.case,
        "delta": str(witness.delta),
        "n_prime": str(witness.n_prime),
        "m_prime": str(witness.m_prime),
        "gap": interval_pair(witness.gap),
        "exact_gap": str(witness.exact_gap) if witness.exact_gap is not None else None,
        "excluded": [str(p) for p in witness.sieve.excluded],
        "threshold": witness.sieve.threshold,
        "bounds": [str(b) for b in witness.sieve.bounds],
        "provenance": {k: str(v) for k, v in witness.provenance.items()},
    }


def gap_certificate_dict(cert: GapCertificate) -> Dict[str, Any]:
    return {
        "kind": cert.kind,
        "left": cert.left,
        "right": cert.right,
        "intermediates": {k: str(v) for k, v in cert.intermediates.items()},
        "bound": interval_pair(cert.bound),
        "direct_gap": interval_pair(cert.direct_gap),
        "reduced_by": cert.reduced_by,
        "passes": cert.passes,
    }


def alpha_certificate_dict(cert: AlphaCertificate) -> Dict[str, Any]:
    return {
        "t": cert.t,
        "delta": str(cert.delta),
        "beta": str(cert.beta),
        "alpha": str(cert.alpha),
        "alpha_enclosure": interval_pair(cert.alpha_enclosure),
        "interval": [str(cert.interval[0]), str(cert.interval[1])],
        "residual": str(cert.residual),
        "listed_measure": str(cert.listed_measure),
        "survivors": [[str(a), str(b)] for a, b in cert.survivors],
        "verify_limit": cert.verify_limit,
        "empirical": jsonable(cert.empirical),
    }


def power_candidate_dict(candidate: PowerCandidate) -> Dict[str, Any]:
    return {
        "a": str(candidate.a),
        "b": str(candidate.b),
        "residual": interval_pair(candidate.residual),
        "source": candidate.source,
        "exact_zero": candidate.exact_zero,
    }


def power_result_dict(result: PowerAttackResult) -> Dict[str, Any]:
    return {
        "alpha": str(result.alpha),
        "c": str(result.c),
        "eps": str(result.eps),
        "best": power_candidate_dict(result.best),
        "candidates_tried": result.candidates_tried,
    }


def system_dict(system, digits: int, budget: Optional[int] = None) -> Dict[str, Any]:
    if isinstance(system, GeneratorSet):
        return {"kind": "generators", "generators": generator_set_dict(system, digits, budget)}
    data: Dict[str, Any] = {"limit": system.limit, "generators": generator_set_dict(system.generator_set, digits, budget)}
    if isinstance(system, QuadAlphaSystem):
        data.update(
            {
                "kind": "quadalpha",
                "a": system.a,
                "b": system.b,
                "q": system.q,
                "alpha": str(system.alpha),
                "sqrt_alpha": jsonable(system.sqrt_alpha_diagnostic(budget=budget)),
            }
        )
    elif isinstance(system, Example1System):
        data.update(
            {
                "kind": "example1",
                "records": [{"p": str(r.p), "f": str(r.f), "g": str(r.g)} for r in system.records],
                "pell_constant": interval_pair(system.pell_constant()),
            }
        )
    elif isinstance(system, Example2System):
        data.update(
            {
                "kind": "example2",
                "records": [
                    {"p": str(r.p), "a": str(r.a), "b": str(r.b), "k": r.k, "f": str(r.f)} for r in system.records
                ],
            }
        )
    return data


def dumps_json(report: RunReport) -> str:
    return json.dumps(jsonable(report.as_dict()), sort_keys=True, indent=2) + "\n"


def _csv_cell(value: Any) -> str:
    text = "" if value is None else str(value)
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def flatten(value: Any, prefix: str = "") -> List[Tuple[str, str]]:
    if isinstance(value, dict):
        items: List[Tuple[str, str]] = []
        for key in sorted(value):
            items.extend(flatten(value[key], f"{prefix}.{key}" if prefix else str(key)))
        return items
    if isinstance(value, list) and value and all(not isinstance(v, (dict, list)) for v in value):
        return [(prefix, "[" + ", ".join(str(v) for v in value) + "]")]
    if isinstance(value, list):
        items = []
        for index, item in enumerate(value):
            items.extend(flatten(item, f"{prefix}[{index}]"))
        return items or [(prefix, "[]")]
    return [(prefix, "" if value is None else str(value))]


class ReportRenderer:
    def __init__(self, template_dir: str = TEMPLATE_DIR):
        self.env = Environment(loader=FileSystemLoader(template_dir), keep_trailing_newline=True)
        self.env.filters["csv"] = _csv_cell

    def render(self, report: RunReport, fmt: str) -> str:
        if fmt == "json":
            return dumps_json(report)
        document = jsonable(report.as_dict())
        if fmt == "csv":
            rows = report.rows or [{"key": k, "value": v} for k, v in flatten(document.get("result") or {})]
            header = list(rows[0].keys()) if rows else ["key", "value"]
            return self.env.get_template("table_csv.txt").render(header=header, rows=rows)
        if fmt == "text":
            context = {
                "command": " ".join(report.command),
                "exit_code": report.exit_code,
                "unresolved_count": report.unresolved_count,
                "config": flatten(document["config"]),
                "result": flatten(document["result"]) if document["result"] is not None else [],
                "error": flatten(document["error"]) if document["error"] is not None else [],
            }
            return self.env.get_template("report_text.txt").render(context)
        raise ValueError(f"unknown output format {fmt!r}")
