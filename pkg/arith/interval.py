"""Outward-rounded real intervals on top of mpmath's directed-rounding kernels.

Endpoints are raw ``mpf`` tuples and every operation takes its working
precision from the interval itself, so no global mpmath context is touched and
intervals can be shared freely between threads.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from mpmath import libmp
from mpmath.libmp import libmpi

Number = Union[int, Fraction]


def mpf_to_fraction(value: tuple) -> Fraction:
    """Exact conversion of a finite ``mpf`` tuple to a :class:`Fraction`."""
    sign, man, exp, _bc = value
    # gmpy2 backends hand out mpz fields; Fraction arithmetic needs plain int
    man, exp = int(man), int(exp)
    if not man:
        if exp:
            raise ValueError("cannot convert an infinite or nan endpoint")
        return Fraction(0)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _from_fraction(value: Fraction, prec: int, rounding) -> tuple:
    if value.denominator == 1:
        return libmp.from_int(value.numerator, prec, rounding)
    return libmp.from_rational(value.numerator, value.denominator, prec, rounding)


@dataclass(frozen=True)
class Interval:
    lo: tuple
    hi: tuple
    prec: int

    # --- constructors ---------------------------------------------------
    @classmethod
    def from_number(cls, value: Number, prec: int) -> "Interval":
        value = Fraction(value)
        lo = _from_fraction(value, prec, libmp.round_floor)
        hi = _from_fraction(value, prec, libmp.round_ceiling)
        return cls(lo, hi, prec)

    @classmethod
    def from_fractions(cls, lo: Fraction, hi: Fraction, prec: int) -> "Interval":
        return cls(
            _from_fraction(Fraction(lo), prec, libmp.round_floor),
            _from_fraction(Fraction(hi), prec, libmp.round_ceiling),
            prec,
        )

    @classmethod
    def pi(cls, prec: int) -> "Interval":
        lo, hi = libmpi.mpi_pi(prec)
        return cls(lo, hi, prec)

    def _wrap(self, pair, prec: Optional[int] = None) -> "Interval":
        return Interval(pair[0], pair[1], prec or self.prec)

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.from_number(other, self.prec)

    @property
    def _pair(self):
        return (self.lo, self.hi)

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "Interval":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_add(self._pair, other._pair, prec), prec)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_sub(self._pair, other._pair, prec), prec)

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Interval":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_mul(self._pair, other._pair, prec), prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return self._wrap(libmpi.mpi_div(self._pair, other._pair, prec), prec)

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other) / self

    def __neg__(self) -> "Interval":
        return self._wrap(libmpi.mpi_neg(self._pair, self.prec))

    def __abs__(self) -> "Interval":
        return self._wrap(libmpi.mpi_abs(self._pair, self.prec))

    def pow_int(self, n: int) -> "Interval":
        return self._wrap(libmpi.mpi_pow_int(self._pair, n, self.prec))

    def exp(self) -> "Interval":
        return self._wrap(libmpi.mpi_exp(self._pair, self.prec))

    def log(self) -> "Interval":
        return self._wrap(libmpi.mpi_log(self._pair, self.prec))

    def sqrt(self) -> "Interval":
        return self._wrap(libmpi.mpi_sqrt(self._pair, self.prec))

    def atan(self) -> "Interval":
        return self._wrap(libmpi.mpi_atan(self._pair, self.prec))

    def sin(self) -> "Interval":
        return self._wrap(libmpi.mpi_sin(self._pair, self.prec))

    def pow_fraction(self, exponent: Fraction) -> "Interval":
        """x**e for a positive interval x."""
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            return self.pow_int(exponent.numerator)
        return (self.log() * exponent).exp()

    # --- inspection -----------------------------------------------------
    @property
    def lower(self) -> Fraction:
        return mpf_to_fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return mpf_to_fraction(self.hi)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def mid(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def is_finite(self) -> bool:
        return all(e not in (libmp.finf, libmp.fninf, libmp.fnan) for e in self._pair)

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def is_positive(self) -> bool:
        return libmp.mpf_gt(self.lo, libmp.fzero)

    def is_negative(self) -> bool:
        return libmp.mpf_lt(self.hi, libmp.fzero)

    def contains_zero(self) -> bool:
        return not (self.is_positive() or self.is_negative())

    def certainly_less(self, other) -> bool:
        other = self._coerce(other)
        return libmp.mpf_lt(self.hi, other.lo)

    def certainly_greater(self, other) -> bool:
        other = self._coerce(other)
        return libmp.mpf_gt(self.lo, other.hi)

    def contains(self, value: Number) -> bool:
        value = Fraction(value)
        return self.lower <= value <= self.upper

    def overlaps(self, other: "Interval") -> bool:
        return not (self.certainly_less(other) or self.certainly_greater(other))

    def certified_floor(self) -> Optional[int]:
        """floor(x) when both endpoints agree on it, else None."""
        if not self.is_finite:
            return None
        lo_floor = math.floor(self.lower)
        if math.floor(self.upper) != lo_floor:
            return None
        return lo_floor

    def hull(self, other: "Interval") -> "Interval":
        lo = self.lo if libmp.mpf_le(self.lo, other.lo) else other.lo
        hi = self.hi if libmp.mpf_ge(self.hi, other.hi) else other.hi
        return Interval(lo, hi, max(self.prec, other.prec))

    def floor_log2(self) -> Optional[int]:
        """floor(log2(lower endpoint)) for a positive interval."""
        sign, man, exp, bc = self.lo
        if sign or not man:
            return None
        return int(exp + bc - 1)

    def to_str(self, digits: int = 20) -> str:
        return "[%s, %s]" % (libmp.to_str(self.lo, digits), libmp.to_str(self.hi, digits))

    def __repr__(self) -> str:
        return f"Interval({self.to_str(12)}, prec={self.prec})"
