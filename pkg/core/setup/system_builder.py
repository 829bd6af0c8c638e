from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from sympy import factorint

from arith.quadratic import QuadSurd
from arith.scalar import RatPow, Rational, RealScalar, Surd
from constructions.systems import (
    Example1System,
    Example2System,
    QuadAlphaSystem,
    cpow_generators,
    example1_generators,
    example2_generators,
    quad_alpha,
)
from core.errors import DomainError
from core.logger import setup_logger
from core.semigroup import GeneratorSet
from primeset.sieve import PrimeClassFilter, sieve

logger = setup_logger(__name__)

System = Union[GeneratorSet, QuadAlphaSystem, Example1System, Example2System]


def surd_literal(x, y, d: int) -> RealScalar:
    """x + y*sqrt(d) with the square part of d pulled out; rational when d is a square."""
    x, y = Fraction(x), Fraction(y)
    if d < 0:
        raise DomainError(f"sqrt of negative {d}")
    if d == 0 or y == 0:
        return Rational(x)
    square, core = 1, 1
    for p, e in factorint(d).items():
        square *= p ** (e // 2)
        core *= p ** (e % 2)
    y *= square
    if core == 1:
        return Rational(x + y)
    if x.denominator != 1 or y.denominator != 1:
        raise DomainError(f"surd literal {x} + {y}*sqrt({core}) needs integer coefficients")
    return Surd(QuadSurd(core, int(x), int(y)))


class SystemBuilder:
    def __init__(self, budget: Optional[int] = None):
        self.budget = budget

    def primes(self, limit: int, modulus: Optional[int] = None, residues: Sequence[int] = ()) -> GeneratorSet:
        prime_filter = PrimeClassFilter(modulus, frozenset(residues)) if modulus is not None else None
        primes = sieve(limit, prime_filter)
        if not primes:
            raise DomainError(f"no primes up to {limit} in the requested class")
        label = f"primes({limit})" if prime_filter is None else f"primes({limit},mod={modulus})"
        logger.debug("Built %s with %d generators", label, len(primes))
        return GeneratorSet.build([Rational(p) for p in primes], label, self.budget)

    def cpow(self, c, limit: int) -> GeneratorSet:
        return cpow_generators(c, limit, self.budget)

    def quad_alpha(self, a: int, b: int, q: int, limit: int) -> QuadAlphaSystem:
        return quad_alpha(a, b, q, limit, self.budget)

    def example1(self, limit: int) -> Example1System:
        return example1_generators(limit, self.budget)

    def example2(self, limit: int) -> Example2System:
        return example2_generators(limit, self.budget)

    def literal(self, values: Iterable[RealScalar]) -> GeneratorSet:
        values = list(values)
        if not values:
            raise DomainError("literal generator list is empty")
        return GeneratorSet.build(values, "list", self.budget)

    def power(self, base, exponent) -> RealScalar:
        value = RatPow(base, exponent)
        exact = value.exact_rational()
        return Rational(exact) if exact is not None else value


def generator_set_of(system: System) -> GeneratorSet:
    if isinstance(system, GeneratorSet):
        return system
    if system.generator_set is None:
        raise DomainError(f"{type(system).__name__} has no generators")
    return system.generator_set
