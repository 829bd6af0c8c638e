"""Labelled transcendental constants (log p, arctan(a/b), pi) and their memo table."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from arith.interval import Interval
from core.errors import DomainError

LOG = "log"
ATAN = "atan"
PI = "pi"


@dataclass(frozen=True, order=True)
class Constant:
    kind: str
    num: int = 0
    den: int = 1

    def __str__(self) -> str:
        if self.kind == LOG:
            return f"log({self.num})"
        if self.kind == ATAN:
            return f"atan({self.num}/{self.den})"
        return "pi"


def log_const(p: int) -> Constant:
    if p < 2:
        raise DomainError(f"log constant needs an integer >= 2, got {p}")
    return Constant(LOG, p, 1)


def atan_const(a: int, b: int) -> Constant:
    if b <= 0:
        raise DomainError("arctan constant needs a positive denominator")
    ratio = Fraction(a, b)
    return Constant(ATAN, ratio.numerator, ratio.denominator)


PI_CONST = Constant(PI)


# lru_cache is internally locked, so concurrent lookup-or-insert is safe
@lru_cache(maxsize=None)
def constant_enclosure(constant: Constant, prec: int) -> Interval:
    if constant.kind == LOG:
        return Interval.from_number(constant.num, prec).log()
    if constant.kind == ATAN:
        return Interval.from_number(Fraction(constant.num, constant.den), prec).atan()
    if constant.kind == PI:
        return Interval.pi(prec)
    raise DomainError(f"unknown constant kind {constant.kind!r}")
