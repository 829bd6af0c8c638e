from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from arith.compare import difference_enclosure, exact_compare
from arith.interval import Interval
from arith.scalar import RealScalar, as_scalar
from core.config import Settings
from core.errors import DomainError
from core.logger import setup_logger
from core.semigroup import Element, GeneratorSet, SemigroupEnumerator, UnresolvedComparison

logger = setup_logger(__name__)

# relative width at which a decided gap stops escalating
_GAP_RESOLUTION_BITS = 40


@dataclass(frozen=True)
class GapPair:
    lower: Element
    upper: Element
    gap: Interval


@dataclass
class GapReport:
    limit: RealScalar
    delta: Fraction
    count: int = 0
    min_gap: Optional[Interval] = None
    argmin: Optional[Tuple[Element, Element]] = None
    histogram: Dict[Optional[int], int] = field(default_factory=dict)
    violations: List[GapPair] = field(default_factory=list)
    unresolved: List[GapPair] = field(default_factory=list)
    unresolved_comparisons: List[UnresolvedComparison] = field(default_factory=list)
    collisions: List[Tuple[Element, Element]] = field(default_factory=list)

    @property
    def unresolved_count(self) -> int:
        return len(self.unresolved) + len(self.unresolved_comparisons)

    @property
    def is_lacunary(self) -> bool:
        """No violation and nothing left undecided within the enumerated prefix."""
        return not self.violations and not self.unresolved_count


def _gap_enclosure(lower: Element, upper: Element, delta: Fraction, settings: Settings, budget) -> Tuple[Interval, bool]:
    """Certified |upper - lower| and whether its relation to delta was decided."""
    exact = exact_compare(lower.value, upper.value)
    if exact is not None and exact.is_equal:
        return Interval.from_number(0, settings.initial_precision_bits), True
    gap = None
    decided = False
    for prec in settings.precisions(budget):
        gap = abs(difference_enclosure(upper.value, lower.value, prec))
        if not gap.is_finite:
            continue
        decided = gap.upper < delta or gap.lower >= delta
        if decided and (gap.is_exact() or gap.width * 2 ** _GAP_RESOLUTION_BITS <= gap.lower):
            break
    return gap, decided


def fold_gaps(
    elements: Iterable[Element], limit: RealScalar, delta, budget: Optional[int] = None
) -> GapReport:
    """Fold consecutive elements of a sorted stream into a :class:`GapReport`."""
    delta = Fraction(delta)
    settings = Settings.from_env(budget)
    report = GapReport(limit=limit, delta=delta)
    previous: Optional[Element] = None
    min_lo: Optional[Fraction] = None
    min_hi: Optional[Fraction] = None
    for element in elements:
        report.count += 1
        if previous is not None:
            gap, decided = _gap_enclosure(previous, element, delta, settings, budget)
            pair = GapPair(previous, element, gap)
            if not decided:
                report.unresolved.append(pair)
            elif gap.upper < delta:
                report.violations.append(pair)
            bucket = gap.floor_log2() if gap.lower > 0 else None
            report.histogram[bucket] = report.histogram.get(bucket, 0) + 1
            if min_lo is None or gap.lower < min_lo:
                min_lo = gap.lower
                report.argmin = (previous, element)
            if min_hi is None or gap.upper < min_hi:
                min_hi = gap.upper
        previous = element
    if min_lo is not None:
        report.min_gap = Interval.from_fractions(min_lo, min_hi, settings.max_precision_bits)
    return report


def gap_report(generators: GeneratorSet, limit, delta, budget: Optional[int] = None) -> GapReport:
    if Fraction(delta) <= 0:
        raise DomainError("delta must be positive")
    limit = as_scalar(limit)
    stream = SemigroupEnumerator(generators, limit, budget)
    report = fold_gaps(stream, limit, delta, budget)
    report.unresolved_comparisons = list(stream.unresolved)
    report.collisions = list(stream.collisions)
    logger.info(
        "Gap report for %s up to %s: %d elements, %d violations, %d unresolved",
        generators.label,
        limit,
        report.count,
        len(report.violations),
        report.unresolved_count,
    )
    return report
