"""Certified three-way comparison and decimal rendering of :mod:`arith.scalar` values."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from arith.interval import Interval
from arith.quadratic import surd_sign
from arith.scalar import LogForm, Rational, RealScalar, Surd
from core.config import Settings
from core.logger import setup_logger

logger = setup_logger(__name__)


class OrderKind(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Ordering3:
    """Outcome of a certified comparison.

    ``precision`` is the working precision that decided the comparison, or the
    cap that was exhausted for ``UNRESOLVED``; exact decisions carry ``None``.
    """

    kind: OrderKind
    precision: Optional[int] = None

    @property
    def is_less(self) -> bool:
        return self.kind is OrderKind.LESS

    @property
    def is_equal(self) -> bool:
        return self.kind is OrderKind.EQUAL

    @property
    def is_greater(self) -> bool:
        return self.kind is OrderKind.GREATER

    @property
    def is_unresolved(self) -> bool:
        return self.kind is OrderKind.UNRESOLVED

    def reversed(self) -> "Ordering3":
        flip = {OrderKind.LESS: OrderKind.GREATER, OrderKind.GREATER: OrderKind.LESS}
        return Ordering3(flip.get(self.kind, self.kind), self.precision)


LESS = Ordering3(OrderKind.LESS)
EQUAL = Ordering3(OrderKind.EQUAL)
GREATER = Ordering3(OrderKind.GREATER)


def _from_sign(sign: int, precision: Optional[int] = None) -> Ordering3:
    if sign < 0:
        return Ordering3(OrderKind.LESS, precision)
    if sign > 0:
        return Ordering3(OrderKind.GREATER, precision)
    return Ordering3(OrderKind.EQUAL, precision)


def _surd_coordinates(value: RealScalar) -> Optional[Tuple[Fraction, Fraction, Optional[int]]]:
    if isinstance(value, Rational):
        return value.value, Fraction(0), None
    if isinstance(value, Surd):
        return Fraction(value.surd.x), Fraction(value.surd.y), value.surd.d
    return None


def _exact_surd_difference(a: RealScalar, b: RealScalar) -> Optional[Tuple[Fraction, Fraction, Optional[int]]]:
    """a - b as (x, y, d) when both live in the same Q(sqrt(d))."""
    ca, cb = _surd_coordinates(a), _surd_coordinates(b)
    if ca is None or cb is None:
        return None
    da, db = ca[2], cb[2]
    if da is not None and db is not None and da != db:
        return None
    return ca[0] - cb[0], ca[1] - cb[1], da if da is not None else db


def _exponent_difference(a: RealScalar, b: RealScalar) -> Optional[LogForm]:
    la = a.log_form()
    if la is None:
        return None
    lb = b.log_form()
    if lb is None:
        return None
    return la - lb


def _sign_by_intervals(enclose, settings: Settings, budget: Optional[int]) -> Ordering3:
    prec = settings.initial_precision_bits
    for prec in settings.precisions(budget):
        enclosure = enclose(prec)
        if enclosure.is_positive():
            return Ordering3(OrderKind.GREATER, prec)
        if enclosure.is_negative():
            return Ordering3(OrderKind.LESS, prec)
        logger.debug("Comparison undecided at %d bits, escalating", prec)
    return Ordering3(OrderKind.UNRESOLVED, prec)


def exact_compare(a: RealScalar, b: RealScalar) -> Optional[Ordering3]:
    """The comparison when a purely symbolic argument settles it, else None."""
    if a == b:
        return EQUAL
    ra, rb = a.exact_rational(), b.exact_rational()
    if ra is not None and rb is not None:
        return _from_sign((ra > rb) - (ra < rb))

    surd_diff = _exact_surd_difference(a, b)
    if surd_diff is not None:
        x, y, d = surd_diff
        if d is None:
            return _from_sign((x > 0) - (x < 0))
        return _from_sign(surd_sign(x, y, d))

    exponent_diff = _exponent_difference(a, b)
    if exponent_diff is not None:
        if exponent_diff.is_zero():
            return EQUAL
        if not exponent_diff.coeffs:
            offset = exponent_diff.offset
            return _from_sign((offset > 0) - (offset < 0))
    return None


def compare(a: RealScalar, b: RealScalar, budget: Optional[int] = None) -> Ordering3:
    """Three-way comparison of ``a`` against ``b``.

    EQUAL is only ever produced by an exact argument; interval overlap at the
    cap yields UNRESOLVED.
    """
    exact = exact_compare(a, b)
    if exact is not None:
        return exact

    settings = Settings.from_env(budget)
    exponent_diff = _exponent_difference(a, b)
    if exponent_diff is not None:
        # e^u against e^v is decided by u against v
        return _sign_by_intervals(exponent_diff.enclose, settings, budget)
    return _sign_by_intervals(lambda prec: a.enclose(prec) - b.enclose(prec), settings, budget)


def difference_enclosure(a: RealScalar, b: RealScalar, prec: int) -> Interval:
    """Enclosure of a - b; exact inputs from one quadratic field avoid cancellation."""
    surd_diff = _exact_surd_difference(a, b)
    if surd_diff is not None:
        x, y, d = surd_diff
        if d is None or y == 0:
            return Interval.from_number(x, prec)
        return Interval.from_number(d, prec).sqrt() * y + x
    return a.enclose(prec) - b.enclose(prec)


def log_enclosure(x: RealScalar, prec: int) -> Interval:
    """Enclosure of log(x) for positive x, taken in exponent space when available."""
    form = x.log_form()
    if form is not None:
        return form.enclose(prec)
    return x.enclose(prec).log()


@dataclass(frozen=True)
class DecimalValue:
    text: str
    error: Fraction
    precision: int

    @property
    def certified(self) -> bool:
        digits = len(self.text.partition(".")[2])
        return self.error < Fraction(1, 10 ** digits)


def format_scaled(scaled: int, digits: int) -> str:
    """Render ``scaled / 10**digits`` with exactly ``digits`` decimals."""
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled))
    if digits <= 0:
        return sign + body
    body = body.rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def to_decimal(a: RealScalar, digits: int, budget: Optional[int] = None) -> DecimalValue:
    """Decimal text within 10**-digits of the true value, plus the exact error bound."""
    if digits < 0:
        raise ValueError("digits must be non-negative")
    unit = Fraction(1, 10 ** digits)
    exact = a.exact_rational()
    settings = Settings.from_env(budget)
    enclosure = None
    prec = settings.initial_precision_bits
    for prec in settings.precisions(budget):
        enclosure = a.enclose(prec)
        if exact is not None or (enclosure.is_finite and enclosure.width < unit / 4):
            break
    center = exact if exact is not None else enclosure.mid
    scaled = round(center * 10 ** digits)
    shown = Fraction(scaled) * unit
    spread = Fraction(0) if exact is not None else enclosure.width / 2
    result = DecimalValue(format_scaled(scaled, digits), abs(shown - center) + spread, prec)
    if not result.certified:
        logger.warning("Decimal rendering of %s exceeds the requested error at %d bits", a, prec)
    return result
