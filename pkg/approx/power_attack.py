"""c-th power approximation attack on {p^c} systems.

For a/b close to alpha^(1/c), the mean value theorem makes |alpha*b^c - a^c|
of order b^(c-2), so convergents of alpha^(1/c) drive the gap to zero.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

from approx.continued_fraction import Convergent, convergents, expand_until, intermediate_fractions
from arith.compare import compare, difference_enclosure
from arith.interval import Interval
from arith.scalar import Rational, RealScalar, multiply, power
from core.config import Settings
from core.errors import DomainError, NotFoundError
from core.logger import setup_logger

logger = setup_logger(__name__)

CONVERGENT = "convergent"
INTERMEDIATE = "intermediate"
SCAN = "scan"


@dataclass(frozen=True)
class PowerCandidate:
    a: int
    b: int
    residual: Interval
    source: str = CONVERGENT

    @property
    def exact_zero(self) -> bool:
        return self.residual.is_exact() and self.residual.upper == 0

    def scaled_residual(self, c: Fraction) -> Fraction:
        """Upper bound of residual * b^(2-c), the quantity the attack keeps bounded."""
        weight = Interval.from_number(self.b, self.residual.prec).pow_fraction(2 - c)
        return (self.residual * weight).upper


@dataclass(frozen=True)
class PowerAttackResult:
    alpha: RealScalar
    c: Fraction
    eps: Fraction
    best: PowerCandidate
    candidates_tried: int

    @property
    def a(self) -> int:
        return self.best.a

    @property
    def b(self) -> int:
        return self.best.b

    @property
    def residual(self) -> Interval:
        return self.best.residual


def _check_inputs(alpha: RealScalar, c: Fraction, budget: Optional[int]) -> None:
    if not (1 < c < 2):
        raise DomainError(f"exponent c must lie in (1, 2), got {c}")
    if not compare(alpha, Rational(1), budget).is_greater:
        raise DomainError(f"alpha must be certified > 1, got {alpha}")


def residual_enclosure(alpha: RealScalar, c: Fraction, a: int, b: int, budget: Optional[int] = None) -> Interval:
    """Enclosure of |alpha*b^c - a^c|, exactly zero when the two sides coincide."""
    settings = Settings.from_env(budget)
    lhs = multiply(alpha, power(Rational(b), c))
    rhs = power(Rational(a), c)
    if compare(lhs, rhs, budget).is_equal:
        return Interval.from_number(0, settings.initial_precision_bits)
    enclosure = None
    for prec in settings.precisions(budget):
        enclosure = abs(difference_enclosure(lhs, rhs, prec))
        if not enclosure.contains_zero() and enclosure.width * 2 ** 24 < enclosure.lower:
            break
    return enclosure


def _root(alpha: RealScalar, c: Fraction) -> RealScalar:
    return power(alpha, 1 / c)


def _candidate_fractions(
    alpha: RealScalar, c: Fraction, bmax: int, intermediates: bool, budget
) -> List[Tuple[Convergent, str]]:
    cf = expand_until(_root(alpha, c), bmax, budget)
    found = [(conv, CONVERGENT) for conv in convergents(cf)]
    if intermediates:
        found.extend((conv, INTERMEDIATE) for conv in intermediate_fractions(cf))
    return [(conv, source) for conv, source in found if 1 <= conv.r <= bmax and conv.a >= 1]


def _scan_fractions(alpha: RealScalar, c: Fraction, bmax: int, budget) -> Iterator[Tuple[Convergent, str]]:
    root = _root(alpha, c)
    settings = Settings.from_env(budget)
    enclosure = root.enclose(4 * settings.initial_precision_bits)
    for b in range(1, bmax + 1):
        scaled = enclosure * b
        for a in sorted({math.floor(scaled.lower), math.ceil(scaled.upper)}):
            if a >= 1:
                yield Convergent(a, b, -1), SCAN


def power_attack_trace(
    alpha: RealScalar,
    c: Fraction,
    bmax: int,
    intermediates: bool = False,
    exhaustive: bool = False,
    budget: Optional[int] = None,
) -> Iterator[PowerCandidate]:
    """Every candidate (a, b) with b <= bmax and its certified residual."""
    c = Fraction(c)
    _check_inputs(alpha, c, budget)
    if bmax < 1:
        raise DomainError("bmax must be at least 1")
    if exhaustive:
        fractions = _scan_fractions(alpha, c, bmax, budget)
    else:
        fractions = _candidate_fractions(alpha, c, bmax, intermediates, budget)
    seen = set()
    for conv, source in fractions:
        key = (conv.a, conv.r)
        if key in seen:
            continue
        seen.add(key)
        residual = residual_enclosure(alpha, c, conv.a, conv.r, budget)
        logger.debug("Candidate %d/%d residual %s", conv.a, conv.r, residual)
        yield PowerCandidate(conv.a, conv.r, residual, source)


def power_attack(
    alpha: RealScalar,
    c,
    eps,
    bmax: int,
    intermediates: bool = False,
    exhaustive: bool = False,
    budget: Optional[int] = None,
) -> PowerAttackResult:
    """Smallest certified residual among the candidates; NotFoundError unless it is < eps."""
    c, eps = Fraction(c), Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    best: Optional[PowerCandidate] = None
    tried = 0
    for candidate in power_attack_trace(alpha, c, bmax, intermediates, exhaustive, budget):
        tried += 1
        if best is None or (candidate.residual.upper, candidate.b) < (best.residual.upper, best.b):
            best = candidate
    if best is None or not best.residual.upper < eps:
        diagnostics = {"bmax": bmax, "candidates": tried}
        if best is not None:
            diagnostics.update({"best_a": best.a, "best_b": best.b, "best_residual": best.residual})
        logger.info("Power attack found no residual below %s with b <= %d", eps, bmax)
        raise NotFoundError(f"no candidate with b <= {bmax} reaches residual {eps}", diagnostics)
    if best.exact_zero:
        logger.warning("alpha = %s is already a c-th power ratio: %d^c = alpha*%d^c", alpha, best.a, best.b)
    logger.info("Power attack found (%d, %d) with residual %s", best.a, best.b, best.residual)
    return PowerAttackResult(alpha, c, eps, best, tried)
