"""Exclusion of the scales beta = log(alpha) in [t, 2t] that put some alpha^k m near n.

A triple (m, n, k) with m, n in B' forbids
beta in (log n - log m)/k + (-2 delta/(k n), delta/(k n)).
Only pairs with n <= cutoff are listed; the rest is covered by ``residual``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import List, Optional, Tuple

from arith.compare import log_enclosure
from arith.interval import Interval
from arith.scalar import ONE, as_scalar
from core.errors import PreconditionError
from core.logger import setup_logger
from core.semigroup import Element, ExponentVec, GeneratorSet, SemigroupEnumerator
from metric.sqrt_sum import SqrtSumBound, sqrt_sum

logger = setup_logger(__name__)

_PREC = 128

Span = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class BadInterval:
    m: str
    n: str
    k: int
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


@dataclass
class BadIntervalSet:
    t: int
    delta: Fraction
    cutoff: int
    intervals: List[BadInterval] = field(default_factory=list)
    merged: List[Span] = field(default_factory=list)
    survivors: List[Span] = field(default_factory=list)
    residual: Fraction = Fraction(0)
    listed_measure: Fraction = Fraction(0)
    bound: Optional[SqrtSumBound] = None
    widened_hits: int = 0
    measure_bound: Fraction = Fraction(0)

    @property
    def total_bad(self) -> Fraction:
        return self.listed_measure + self.residual

    def widest_survivor(self) -> Optional[Span]:
        if not self.survivors:
            return None
        # ties go to the leftmost span
        return max(self.survivors, key=lambda s: (s[1] - s[0], -s[0]))


def harmonic_constant(prec: int = _PREC) -> Interval:
    """c = 1 + log 6, the bound on sum 1/k over the admissible k-range."""
    return Interval.from_number(6, prec).log() + 1


def merge_spans(spans: List[Span]) -> List[Span]:
    merged: List[Span] = []
    for lo, hi in sorted(spans):
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def complement(merged: List[Span], lo: Fraction, hi: Fraction) -> List[Span]:
    result: List[Span] = []
    cursor = lo
    for a, b in merged:
        if a > cursor:
            result.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < hi:
        result.append((cursor, hi))
    return result


def check_scale(t: int, delta: Fraction) -> None:
    if not t > 4 * delta:
        logger.error("Scale t=%s fails t > 4*delta for delta=%s", t, delta)
        raise PreconditionError(f"t > 4*delta fails: t={t}, delta={delta}")
    if 3 * delta > 1 and not Interval.from_number(3 * delta, _PREC).log().certainly_less(t):
        raise PreconditionError(f"t > log(3*delta) fails: t={t}, delta={delta}")


def _elements(generators: Optional[GeneratorSet], cutoff: int, budget) -> List[Element]:
    if generators is None or not len(generators):
        return [Element(ExponentVec(), ONE)]
    return list(SemigroupEnumerator(generators, as_scalar(cutoff), budget))


def bad_intervals(
    generators: Optional[GeneratorSet], delta, t: int, cutoff: int, budget: Optional[int] = None
) -> BadIntervalSet:
    delta = Fraction(delta)
    check_scale(t, delta)
    result = BadIntervalSet(t=t, delta=delta, cutoff=cutoff)
    bound = sqrt_sum(generators, cutoff, budget)
    result.bound = bound

    elements = _elements(generators, cutoff, budget)
    logs = [log_enclosure(e.value, _PREC) for e in elements]
    values = [e.value.enclose(_PREC) for e in elements]
    half_scale = Interval.from_number(t, _PREC).exp() / 2
    lo_t, hi_t = Fraction(t), Fraction(2 * t)

    spans: List[Span] = []
    for j, n in enumerate(elements):
        n_lower = values[j].lower
        for i, m in enumerate(elements[:j]):
            # keep the pair unless n <= e^t m / 2 is certain
            if values[j].upper <= (half_scale * values[i]).lower:
                continue
            distance = logs[j] - logs[i]
            k_min = max(1, floor(distance.lower / (3 * t)) - 1)
            k_max = ceil(2 * distance.upper / t) + 1
            for k in range(k_min, k_max + 1):
                centre = distance / k
                lo = centre.lower - 2 * delta / (k * n_lower)
                hi = centre.upper + delta / (k * n_lower)
                lo, hi = max(lo, lo_t), min(hi, hi_t)
                if lo >= hi:
                    continue
                if not (distance.upper / (3 * t) < k < 2 * distance.lower / t):
                    result.widened_hits += 1
                result.intervals.append(BadInterval(str(m.exponents), str(n.exponents), k, lo, hi))
                spans.append((lo, hi))

    result.merged = merge_spans(spans)
    result.listed_measure = sum((b - a for a, b in result.merged), Fraction(0))
    result.survivors = complement(result.merged, lo_t, hi_t)
    scale = harmonic_constant() * 6 * delta * Interval.from_number(Fraction(-t, 2), _PREC).exp() * bound.s_upper
    result.measure_bound = (scale * bound.s_upper).upper
    residual = scale * bound.tail
    result.residual = residual.upper if bound.tail > 0 else Fraction(0)
    logger.info(
        "bad_intervals t=%d: %d triples, listed %.6f, residual %.6g, %d survivors",
        t,
        len(result.intervals),
        float(result.listed_measure),
        float(result.residual),
        len(result.survivors),
    )
    return result
