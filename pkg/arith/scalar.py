"""Exact tagged real numbers with adaptive-precision interval enclosures.

Variants: :class:`Rational`, :class:`Surd`, :class:`RatPow`, :class:`ExpForm`
and the internal :class:`Product` fallback. Values are immutable; enclosures
are memoised per precision on the instance.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple, Union

from sympy import factorint, integer_nthroot

from arith.constants import LOG, Constant, constant_enclosure, log_const
from arith.interval import Interval
from arith.quadratic import QuadSurd
from core.errors import DomainError

Coeffs = Tuple[Tuple[Constant, Fraction], ...]


def _normalize_coeffs(mapping: Dict[Constant, Fraction]) -> Coeffs:
    return tuple(sorted((c, Fraction(v)) for c, v in mapping.items() if v != 0))


@dataclass(frozen=True)
class LogForm:
    """offset + sum(coeff * constant): the exponent-space form of a positive real."""

    offset: Fraction = Fraction(0)
    coeffs: Coeffs = ()

    @classmethod
    def build(cls, offset=0, mapping: Optional[Dict[Constant, Fraction]] = None) -> "LogForm":
        return cls(Fraction(offset), _normalize_coeffs(mapping or {}))

    def as_dict(self) -> Dict[Constant, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "LogForm") -> "LogForm":
        merged = self.as_dict()
        for c, v in other.coeffs:
            merged[c] = merged.get(c, Fraction(0)) + v
        return LogForm.build(self.offset + other.offset, merged)

    def scale(self, k) -> "LogForm":
        k = Fraction(k)
        return LogForm.build(self.offset * k, {c: v * k for c, v in self.coeffs})

    def __neg__(self) -> "LogForm":
        return self.scale(-1)

    def __sub__(self, other: "LogForm") -> "LogForm":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.offset == 0 and not self.coeffs

    def enclose(self, prec: int) -> Interval:
        total = Interval.from_number(self.offset, prec)
        for constant, coeff in self.coeffs:
            total = total + constant_enclosure(constant, prec) * coeff
        return total

    def __str__(self) -> str:
        parts = []
        if self.offset or not self.coeffs:
            parts.append(str(self.offset))
        for constant, coeff in self.coeffs:
            parts.append(f"{coeff}*{constant}")
        return " + ".join(parts)


def rational_log_form(value: Fraction) -> LogForm:
    if value <= 0:
        raise DomainError(f"log of non-positive rational {value}")
    mapping: Dict[Constant, Fraction] = {}
    for p, e in factorint(value.numerator).items():
        mapping[log_const(p)] = Fraction(e)
    for p, e in factorint(value.denominator).items():
        mapping[log_const(p)] = mapping.get(log_const(p), Fraction(0)) - e
    return LogForm.build(0, mapping)


def _exact_root(value: Fraction, k: int) -> Optional[Fraction]:
    num, num_exact = integer_nthroot(value.numerator, k)
    if not num_exact:
        return None
    den, den_exact = integer_nthroot(value.denominator, k)
    if not den_exact:
        return None
    return Fraction(int(num), int(den))


class RealScalar(ABC):
    """Common interface of the exact real variants."""

    def enclose(self, prec: int) -> Interval:
        cached = self._memo.get(prec)
        if cached is None:
            cached = self._compute_enclosure(prec)
            self._memo[prec] = cached
        return cached

    @abstractmethod
    def _compute_enclosure(self, prec: int) -> Interval:
        raise NotImplementedError

    @abstractmethod
    def describe(self) -> str:
        raise NotImplementedError

    def exact_rational(self) -> Optional[Fraction]:
        return None

    def log_form(self) -> Optional[LogForm]:
        return None

    def sort_key(self) -> Tuple[str, str]:
        return (type(self).__name__, self.describe())

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class Rational(RealScalar):
    value: Fraction
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def _compute_enclosure(self, prec: int) -> Interval:
        return Interval.from_number(self.value, prec)

    def exact_rational(self) -> Optional[Fraction]:
        return self.value

    def log_form(self) -> Optional[LogForm]:
        if self.value <= 0:
            return None
        return rational_log_form(self.value)

    def describe(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Surd(RealScalar):
    surd: QuadSurd
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def _compute_enclosure(self, prec: int) -> Interval:
        return self.surd.enclose(prec)

    def exact_rational(self) -> Optional[Fraction]:
        return Fraction(self.surd.x) if self.surd.y == 0 else None

    def log_form(self) -> Optional[LogForm]:
        # y*sqrt(d) == (d*y^2)^(1/2); other surds have no exponent-space form
        if self.surd.x == 0 and self.surd.y > 0:
            return rational_log_form(Fraction(self.surd.d * self.surd.y ** 2)).scale(Fraction(1, 2))
        if self.surd.y == 0 and self.surd.x > 0:
            return rational_log_form(Fraction(self.surd.x))
        return None

    def describe(self) -> str:
        return str(self.surd)


@dataclass(frozen=True)
class RatPow(RealScalar):
    """base**exponent for a positive rational base and rational exponent."""

    base: Fraction
    exponent: Fraction
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        if self.base <= 0:
            raise DomainError(f"rational power needs a positive base, got {self.base}")

    def exact_rational(self) -> Optional[Fraction]:
        if self.base == 1 or self.exponent == 0:
            return Fraction(1)
        root = _exact_root(self.base, self.exponent.denominator)
        if root is None:
            return None
        return root ** self.exponent.numerator

    def log_form(self) -> Optional[LogForm]:
        return rational_log_form(self.base).scale(self.exponent)

    def _compute_enclosure(self, prec: int) -> Interval:
        exact = self.exact_rational()
        if exact is not None:
            return Interval.from_number(exact, prec)
        return self.log_form().enclose(prec).exp()

    def describe(self) -> str:
        return f"pow({self.base}, {self.exponent})"


@dataclass(frozen=True)
class ExpForm(RealScalar):
    """e**(offset + sum coeff*constant)."""

    exponent: LogForm
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def build(cls, offset=0, mapping: Optional[Dict[Constant, Fraction]] = None) -> "ExpForm":
        return cls(LogForm.build(offset, mapping))

    @property
    def offset(self) -> Fraction:
        return self.exponent.offset

    @property
    def coeffs(self) -> Coeffs:
        return self.exponent.coeffs

    def exact_rational(self) -> Optional[Fraction]:
        if self.exponent.offset != 0:
            return None
        value = Fraction(1)
        for constant, coeff in self.exponent.coeffs:
            if constant.kind != LOG or coeff.denominator != 1:
                return None
            value *= Fraction(constant.num) ** coeff.numerator
        return value

    def log_form(self) -> Optional[LogForm]:
        return self.exponent

    def _compute_enclosure(self, prec: int) -> Interval:
        return self.exponent.enclose(prec).exp()

    def describe(self) -> str:
        return f"exp({self.exponent})"


@dataclass(frozen=True)
class Product(RealScalar):
    """Finite product of positive scalars raised to rational exponents."""

    factors: Tuple[Tuple[RealScalar, Fraction], ...]
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def _compute_enclosure(self, prec: int) -> Interval:
        total = Interval.from_number(1, prec)
        for factor, e in self.factors:
            total = total * factor.enclose(prec).pow_fraction(e)
        return total

    def exact_rational(self) -> Optional[Fraction]:
        value = Fraction(1)
        for factor, e in self.factors:
            r = factor.exact_rational()
            if r is None or e.denominator != 1:
                return None
            value *= r ** e.numerator
        return value

    def log_form(self) -> Optional[LogForm]:
        total = LogForm()
        for factor, e in self.factors:
            form = factor.log_form()
            if form is None:
                return None
            total = total + form.scale(e)
        return total

    def describe(self) -> str:
        return " * ".join(
            f"({factor.describe()})" + ("" if e == 1 else f"^({e})") for factor, e in self.factors
        )


ONE = Rational(Fraction(1))


def as_scalar(value: Union[RealScalar, int, Fraction, str]) -> RealScalar:
    if isinstance(value, RealScalar):
        return value
    if isinstance(value, (int, Fraction, str)):
        return Rational(Fraction(value))
    raise DomainError(f"cannot interpret {value!r} as a real scalar")


def _simplify(value: RealScalar) -> RealScalar:
    if not isinstance(value, Rational):
        exact = value.exact_rational()
        if exact is not None:
            return Rational(exact)
    return value


def _product_factors(value: RealScalar) -> Iterable[Tuple[RealScalar, Fraction]]:
    if isinstance(value, Product):
        return value.factors
    return ((value, Fraction(1)),)


def _make_product(factors: Iterable[Tuple[RealScalar, Fraction]]) -> RealScalar:
    merged: Dict[RealScalar, Fraction] = {}
    for factor, e in factors:
        merged[factor] = merged.get(factor, Fraction(0)) + e
    items = tuple(sorted(((f, e) for f, e in merged.items() if e != 0), key=lambda fe: fe[0].sort_key()))
    if not items:
        return ONE
    if len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    return _simplify(Product(items))


def multiply(a: RealScalar, b: RealScalar) -> RealScalar:
    """Exact product, staying in the closed variant whenever one exists."""
    if a == ONE:
        return b
    if b == ONE:
        return a
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Rational(a.value * b.value)
    if isinstance(a, Surd) and isinstance(b, Surd) and a.surd.d == b.surd.d:
        return _simplify(Surd(a.surd * b.surd))
    if isinstance(a, Surd) and isinstance(b, Rational):
        a, b = b, a
    if isinstance(a, Rational) and isinstance(b, Surd) and a.value.denominator == 1:
        return _simplify(Surd(b.surd * a.value.numerator))
    if isinstance(a, RatPow) and isinstance(b, RatPow) and a.exponent == b.exponent:
        return _simplify(RatPow(a.base * b.base, a.exponent))
    if isinstance(a, ExpForm) or isinstance(b, ExpForm):
        la, lb = a.log_form(), b.log_form()
        if la is not None and lb is not None:
            return _simplify(ExpForm(la + lb))
    return _make_product(tuple(_product_factors(a)) + tuple(_product_factors(b)))


def power(a: RealScalar, exponent) -> RealScalar:
    """a**exponent for a non-negative integer or a rational exponent (positive a)."""
    exponent = Fraction(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return a
    if exponent.denominator == 1 and exponent > 0:
        n = exponent.numerator
        if isinstance(a, Rational):
            return Rational(a.value ** n)
        if isinstance(a, Surd):
            return _simplify(Surd(a.surd ** n))
    if isinstance(a, Rational) and a.value > 0:
        return _simplify(RatPow(a.value, exponent))
    if isinstance(a, RatPow):
        return _simplify(RatPow(a.base, a.exponent * exponent))
    if isinstance(a, ExpForm):
        return _simplify(ExpForm(a.exponent.scale(exponent)))
    return _make_product((f, e * exponent) for f, e in _product_factors(a))
