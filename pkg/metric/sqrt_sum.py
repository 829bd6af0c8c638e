from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from arith.compare import compare
from arith.interval import Interval
from arith.scalar import ONE, as_scalar
from core.errors import DomainError
from core.logger import setup_logger
from core.semigroup import GeneratorSet, SemigroupEnumerator

logger = setup_logger(__name__)

EULER_PRODUCT = "euler-product"
# enclosures here feed a measure bound, not an ordering decision
_PREC = 128


@dataclass(frozen=True)
class SqrtSumBound:
    """Certified bracket S_lower <= sum over B' of 1/sqrt(b) <= S_upper."""

    s_lower: Fraction
    s_upper: Fraction
    cutoff: int
    method: str = EULER_PRODUCT
    terms: int = 0

    @property
    def tail(self) -> Fraction:
        """Safe overestimate of the sum over elements above the cutoff."""
        return self.s_upper - self.s_lower


def sqrt_sum(generators: Optional[GeneratorSet], cutoff: int, budget: Optional[int] = None) -> SqrtSumBound:
    if cutoff < 1:
        raise DomainError("cutoff must be at least 1")
    if generators is None or not len(generators):
        return SqrtSumBound(Fraction(1), Fraction(1), cutoff, EULER_PRODUCT, 1)

    product = Interval.from_number(1, _PREC)
    for g in generators:
        if not compare(g, ONE, budget).is_greater:
            logger.error("sqrt_sum: generator %s is not > 1", g)
            raise DomainError(f"generator {g} must be > 1")
        root = g.enclose(_PREC).sqrt()
        product = product * (1 + 1 / (root - 1))
    if not product.is_finite:
        raise DomainError(f"Euler product over {generators.label} is not finite at {_PREC} bits")

    partial = Fraction(0)
    terms = 0
    for element in SemigroupEnumerator(generators, as_scalar(cutoff), budget):
        partial += (1 / element.value.enclose(_PREC).sqrt()).lower
        terms += 1
    upper = product.upper
    if partial > upper:
        raise DomainError(f"partial sum {float(partial)} exceeds the Euler product {float(upper)}")
    logger.debug("sqrt_sum over %s: %d terms, [%s, %s]", generators.label, terms, float(partial), float(upper))
    return SqrtSumBound(partial, upper, cutoff, EULER_PRODUCT, terms)
