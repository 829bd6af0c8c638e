"""Certified continued-fraction expansion and convergents."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from arith.scalar import RealScalar
from core.config import Settings
from core.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Convergent:
    a: int
    r: int
    index: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.r)

    def __str__(self) -> str:
        return f"{self.a}/{self.r}"


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients of ``value``; the first ``certified`` are proven.

    ``exhausted`` is set when the value is rational and its expansion ended
    before the requested count.
    """

    value: RealScalar
    quotients: Tuple[int, ...]
    certified: int
    exhausted: bool = False
    precision: Optional[int] = None

    def certified_quotients(self) -> Tuple[int, ...]:
        return self.quotients[: self.certified]

    def __str__(self) -> str:
        q = self.certified_quotients()
        if not q:
            return "[]"
        return f"[{q[0]};" + ",".join(str(v) for v in q[1:]) + "]"


def _rational_quotients(value: Fraction, count: int) -> Tuple[List[int], bool]:
    quotients: List[int] = []
    while len(quotients) < count:
        q = math.floor(value)
        quotients.append(q)
        rest = value - q
        if rest == 0:
            return quotients, True
        value = 1 / rest
    return quotients, False


def _common_prefix(lo: Fraction, hi: Fraction, count: int) -> List[int]:
    """Quotients shared by every real in [lo, hi]."""
    quotients: List[int] = []
    while len(quotients) < count:
        q = math.floor(lo)
        if math.floor(hi) != q:
            break
        quotients.append(q)
        lo_rest, hi_rest = lo - q, hi - q
        if lo_rest == 0:
            break
        # x -> 1/(x - q) reverses the orientation
        lo, hi = 1 / hi_rest, 1 / lo_rest
    return quotients


def expand(x: RealScalar, count: int, budget: Optional[int] = None) -> CFExpansion:
    if count < 1:
        raise ValueError("count must be at least 1")
    exact = x.exact_rational()
    if exact is not None:
        quotients, exhausted = _rational_quotients(exact, count)
        return CFExpansion(x, tuple(quotients), len(quotients), exhausted)

    settings = Settings.from_env(budget)
    best: List[int] = []
    used = settings.initial_precision_bits
    for prec in settings.precisions(budget):
        used = prec
        enclosure = x.enclose(prec)
        if not enclosure.is_finite:
            continue
        quotients = _common_prefix(enclosure.lower, enclosure.upper, count)
        if len(quotients) > len(best):
            best = quotients
        if len(best) >= count:
            break
        logger.debug("Certified %d of %d quotients at %d bits", len(best), count, prec)
    if len(best) < count:
        logger.warning("Precision cap reached with %d of %d quotients certified for %s", len(best), count, x)
    return CFExpansion(x, tuple(best), len(best), False, used)


def convergents(cf: CFExpansion) -> List[Convergent]:
    quotients = cf.certified_quotients()
    if not quotients:
        raise ValueError("expansion has no certified quotients")
    result: List[Convergent] = []
    a_prev, a = 1, quotients[0]
    r_prev, r = 0, 1
    result.append(Convergent(a, r, 0))
    for index, q in enumerate(quotients[1:], start=1):
        a_prev, a = a, q * a + a_prev
        r_prev, r = r, q * r + r_prev
        result.append(Convergent(a, r, index))
    return result


def intermediate_fractions(cf: CFExpansion) -> List[Convergent]:
    """Semiconvergents (a_{k-1} + j*a_k)/(r_{k-1} + j*r_k), 0 < j < q_{k+1}."""
    quotients = cf.certified_quotients()
    convs = convergents(cf)
    result: List[Convergent] = []
    for k in range(1, len(convs) - 1):
        prev, cur = convs[k - 1], convs[k]
        for j in range(1, quotients[k + 1]):
            result.append(Convergent(prev.a + j * cur.a, prev.r + j * cur.r, k))
    return result


def determinant(first: Convergent, second: Convergent) -> int:
    return second.a * first.r - first.a * second.r


def max_partial_quotient(cf: CFExpansion) -> int:
    """Largest partial quotient after the integer part; 0 when there is none."""
    tail = cf.certified_quotients()[1:]
    return max(tail) if tail else 0


def expand_until(x: RealScalar, max_denominator: int, budget: Optional[int] = None) -> CFExpansion:
    """Grow the expansion until a convergent denominator exceeds ``max_denominator``."""
    count = 8
    while True:
        cf = expand(x, count, budget)
        if cf.exhausted or cf.certified < count:
            return cf
        if convergents(cf)[-1].r > max_denominator:
            return cf
        count *= 2
