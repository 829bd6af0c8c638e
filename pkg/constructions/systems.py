"""Builders for the three lacunary constructions and for {p^c} systems."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple

from sympy import factorint

from approx.continued_fraction import expand, max_partial_quotient
from arith.compare import compare
from arith.constants import PI_CONST, Constant, atan_const, constant_enclosure, log_const
from arith.interval import Interval
from arith.quadratic import GaussianInt, QuadSurd, is_squarefree
from arith.scalar import ExpForm, LogForm, Rational, RatPow, RealScalar, Surd
from core.config import Settings
from core.errors import CertificationError, DomainError
from core.logger import setup_logger
from core.semigroup import ExponentVec, GeneratorSet
from primeset.representations import min_pell_rep, two_squares
from primeset.sieve import PrimeClassFilter, sieve

logger = setup_logger(__name__)

PELL_PRIMES = PrimeClassFilter(8, frozenset({1, 7}))
GAUSSIAN_PRIMES = PrimeClassFilter(4, frozenset({1}))


def _prime_of_index(generators: GeneratorSet, primes_by_value: Dict[RealScalar, int], exponents: ExponentVec) -> Dict[int, int]:
    result: Dict[int, int] = {}
    for index, e in exponents.entries:
        p = primes_by_value[generators[index]]
        result[p] = result.get(p, 0) + e
    return result


def _integer_from(factors: Dict[int, int]) -> int:
    n = 1
    for p, e in factors.items():
        n *= p ** e
    return n


@dataclass
class QuadAlphaSystem:
    """Prime squares p^2 <= limit together with alpha = (a*sqrt(q) + b)^2."""

    a: int
    b: int
    q: int
    limit: int
    root: QuadSurd
    alpha: Surd
    generator_set: GeneratorSet

    @property
    def alpha_index(self) -> int:
        return self.generator_set.generators.index(self.alpha)

    def decompose(self, exponents: ExponentVec) -> Tuple[int, int]:
        """(k, m) with element = alpha^k * m^2."""
        k = 0
        m = 1
        for index, e in exponents.entries:
            g = self.generator_set[index]
            if g == self.alpha:
                k += e
            else:
                m *= _isqrt_exact(g.exact_rational().numerator) ** e
        return k, m

    def sqrt_alpha_diagnostic(self, count: int = 24, budget: Optional[int] = None) -> Dict[str, object]:
        """Partial quotients of sqrt(alpha) = a*sqrt(q) + b; bounded quotients hint at bad approximability."""
        cf = expand(Surd(self.root), count, budget)
        quotients = cf.certified_quotients()
        return {
            "quotients": list(quotients),
            "certified": cf.certified,
            "max_partial_quotient": max_partial_quotient(cf),
            "period": _detect_period(quotients[1:]),
        }


def _isqrt_exact(n: int) -> int:
    r = isqrt(n)
    if r * r != n:
        raise DomainError(f"{n} is not a perfect square")
    return r


def _detect_period(tail: Tuple[int, ...]) -> Optional[int]:
    """Shortest period of the quotient tail, if it repeats at least twice."""
    for length in range(1, len(tail) // 2 + 1):
        if all(tail[i] == tail[i + length] for i in range(len(tail) - length)):
            return length
    return None


def quad_alpha(a: int, b: int, q: int, limit: int, budget: Optional[int] = None) -> QuadAlphaSystem:
    if a < 1 or b < 1:
        raise DomainError("a and b must be positive integers")
    if q < 2 or not is_squarefree(q):
        logger.error("quad_alpha: q=%d is not squarefree", q)
        raise DomainError(f"q={q} is not a squarefree integer >= 2")
    root = QuadSurd(q, b, a)
    expanded = root * root
    if expanded.y == 0:
        raise CertificationError("alpha has no surd part", {"a": a, "b": b, "q": q})
    alpha = Surd(expanded)
    squares = [Rational(p * p) for p in sieve(_isqrt_floor(limit))]
    generator_set = GeneratorSet.build(squares + [alpha], f"quad({a},{b},{q})", budget)
    logger.info("quad_alpha(%d, %d, %d): alpha = %s with %d prime squares", a, b, q, alpha, len(squares))
    return QuadAlphaSystem(a, b, q, limit, root, alpha, generator_set)


def _isqrt_floor(n: int) -> int:
    return isqrt(max(n, 0))


@dataclass(frozen=True)
class Example1Record:
    p: int
    f: QuadSurd
    g: QuadSurd


@dataclass
class Example1System:
    limit: int
    records: List[Example1Record]
    generator_set: Optional[GeneratorSet]
    primes_by_value: Dict[RealScalar, int] = field(default_factory=dict)

    def record(self, p: int) -> Example1Record:
        for rec in self.records:
            if rec.p == p:
                return rec
        raise DomainError(f"{p} is not a generator prime of this system")

    def f_of(self, m: int) -> QuadSurd:
        """Multiplicative extension of f to products of the system's primes."""
        if m < 1:
            raise DomainError("f is defined on positive integers")
        result = QuadSurd(2, 1, 0)
        for p, e in factorint(m).items():
            result = result * self.record(p).f ** e
        return result

    def g_of(self, m: int) -> QuadSurd:
        f = self.f_of(m)
        return f * f

    def integer_of(self, exponents: ExponentVec) -> int:
        return _integer_from(_prime_of_index(self.generator_set, self.primes_by_value, exponents))

    def pell_constant(self, prec: int = 128) -> Optional[Interval]:
        """Enclosure of max f(p)/sqrt(p) over the system's primes."""
        best: Optional[Interval] = None
        for rec in self.records:
            ratio = (rec.g.enclose(prec) / rec.p).sqrt()
            if best is None or ratio.upper > best.upper:
                best = ratio
        return best


def example1_generators(limit: int, budget: Optional[int] = None) -> Example1System:
    records = []
    for p in sieve(limit, PELL_PRIMES):
        f = min_pell_rep(p)
        records.append(Example1Record(p, f, f * f))
    if not records:
        logger.info("example1_generators(%d): no primes = +-1 mod 8", limit)
        return Example1System(limit, [], None)
    by_value = {Surd(rec.g): rec.p for rec in records}
    generator_set = GeneratorSet.build(list(by_value), "example1", budget)
    system = Example1System(limit, records, generator_set, by_value)
    logger.info("example1_generators(%d): %d generators, pell constant %s", limit, len(records), system.pell_constant())
    return system


@dataclass(frozen=True)
class Example2Record:
    p: int
    a: int
    b: int
    rho: GaussianInt
    h: Constant
    k: int
    f: LogForm
    g: ExpForm


@dataclass
class Example2System:
    limit: int
    records: List[Example2Record]
    generator_set: Optional[GeneratorSet]
    primes_by_value: Dict[RealScalar, int] = field(default_factory=dict)

    def record(self, p: int) -> Example2Record:
        for rec in self.records:
            if rec.p == p:
                return rec
        raise DomainError(f"{p} is not a generator prime of this system")

    def rho_of(self, m: int) -> GaussianInt:
        if m < 1:
            raise DomainError("rho is defined on positive integers")
        result = GaussianInt(1, 0)
        for p, e in factorint(m).items():
            result = result * self.record(p).rho ** e
        return result

    def f_of(self, m: int) -> LogForm:
        result = LogForm()
        for p, e in factorint(m).items():
            result = result + self.record(p).f.scale(e)
        return result

    def g_of(self, m: int) -> ExpForm:
        return ExpForm(self.f_of(m))

    def integer_of(self, exponents: ExponentVec) -> int:
        return _integer_from(_prime_of_index(self.generator_set, self.primes_by_value, exponents))


def winding_number(p: int, h: Constant, budget: Optional[int] = None) -> int:
    """The unique k with log p < h + 2k*pi < log p + 2*pi."""
    settings = Settings.from_env(budget)
    for prec in settings.precisions(budget):
        two_pi = constant_enclosure(PI_CONST, prec) * 2
        ratio = (constant_enclosure(log_const(p), prec) - constant_enclosure(h, prec)) / two_pi
        floor = ratio.certified_floor()
        if floor is not None:
            return floor + 1
    raise CertificationError(f"winding number of {p} undecided at the precision cap", {"p": p})


def example2_record(p: int, budget: Optional[int] = None) -> Example2Record:
    a, b = two_squares(p)
    h = atan_const(a, b)
    k = winding_number(p, h, budget)
    f = LogForm.build(0, {h: Fraction(1), PI_CONST: Fraction(2 * k)})
    g = ExpForm(f)
    # log p < f(p) < log p + 2*pi, checked in exponent space
    above = compare(g, Rational(p), budget)
    below = compare(g, ExpForm(LogForm.build(0, {log_const(p): Fraction(1), PI_CONST: Fraction(2)})), budget)
    if not (above.is_greater and below.is_less):
        raise CertificationError(
            f"winding window check failed for {p}",
            {"p": p, "k": k, "above": above.kind.value, "below": below.kind.value},
        )
    return Example2Record(p, a, b, GaussianInt(b, a), h, k, f, g)


def example2_generators(limit: int, budget: Optional[int] = None) -> Example2System:
    records = [example2_record(p, budget) for p in sieve(limit, GAUSSIAN_PRIMES)]
    if not records:
        logger.info("example2_generators(%d): no primes = 1 mod 4", limit)
        return Example2System(limit, [], None)
    by_value = {rec.g: rec.p for rec in records}
    generator_set = GeneratorSet.build(list(by_value), "example2", budget)
    logger.info("example2_generators(%d): %d generators", limit, len(records))
    return Example2System(limit, records, generator_set, by_value)


def cpow_generators(c, limit: int, budget: Optional[int] = None) -> GeneratorSet:
    c = Fraction(c)
    if not (1 < c < 2):
        logger.error("cpow_generators: c=%s outside (1, 2)", c)
        raise DomainError(f"exponent c={c} must lie in (1, 2)")
    return GeneratorSet.build([RatPow(p, c) for p in sieve(limit)], f"cpow({c})", budget)
