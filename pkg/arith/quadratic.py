"""Exact arithmetic in Z[sqrt(d)] and in the Gaussian integers."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import factorint

from arith.interval import Interval
from core.errors import DomainError
from core.logger import setup_logger

logger = setup_logger(__name__)


@lru_cache(maxsize=4096)
def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    return all(e == 1 for e in factorint(n).values())


def surd_sign(x: Fraction, y: Fraction, d: int) -> int:
    """Exact sign of x + y*sqrt(d) for rational x, y and squarefree d >= 2."""
    sx = (x > 0) - (x < 0)
    sy = (y > 0) - (y < 0)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    # opposite signs: compare x^2 against d*y^2
    lhs = x * x
    rhs = d * y * y
    if lhs == rhs:
        return 0
    return sx if lhs > rhs else sy


@dataclass(frozen=True)
class QuadSurd:
    """x + y*sqrt(d) with integer coordinates and squarefree d >= 2."""

    d: int
    x: int
    y: int

    def __post_init__(self):
        if self.d < 2 or not is_squarefree(self.d):
            raise DomainError(f"radicand {self.d} is not a squarefree integer >= 2")

    def _check(self, other: "QuadSurd") -> None:
        if self.d != other.d:
            logger.error("Mismatched radicands %d and %d", self.d, other.d)
            raise DomainError(f"mismatched radicands {self.d} and {other.d}")

    def __mul__(self, other: "QuadSurd") -> "QuadSurd":
        if isinstance(other, int):
            return QuadSurd(self.d, self.x * other, self.y * other)
        self._check(other)
        return QuadSurd(
            self.d,
            self.x * other.x + self.d * self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    __rmul__ = __mul__

    def __add__(self, other) -> "QuadSurd":
        if isinstance(other, int):
            return QuadSurd(self.d, self.x + other, self.y)
        self._check(other)
        return QuadSurd(self.d, self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __sub__(self, other) -> "QuadSurd":
        if isinstance(other, int):
            return QuadSurd(self.d, self.x - other, self.y)
        self._check(other)
        return QuadSurd(self.d, self.x - other.x, self.y - other.y)

    def __neg__(self) -> "QuadSurd":
        return QuadSurd(self.d, -self.x, -self.y)

    def __pow__(self, n: int) -> "QuadSurd":
        if n < 0:
            raise DomainError("negative powers leave Z[sqrt(d)]")
        result = QuadSurd(self.d, 1, 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.d, self.x, -self.y)

    def norm(self) -> int:
        return self.x * self.x - self.d * self.y * self.y

    def sign(self) -> int:
        return surd_sign(Fraction(self.x), Fraction(self.y), self.d)

    def __abs__(self) -> "QuadSurd":
        return -self if self.sign() < 0 else self

    def is_rational(self) -> bool:
        return self.y == 0

    def enclose(self, prec: int) -> Interval:
        root = Interval.from_number(self.d, prec).sqrt()
        return root * self.y + self.x

    def __str__(self) -> str:
        op = "-" if self.y < 0 else "+"
        return f"{self.x}{op}{abs(self.y)}*sqrt({self.d})"


def quad_mul(a: QuadSurd, b: QuadSurd) -> QuadSurd:
    return a * b


def quad_norm(a: QuadSurd) -> int:
    return a.norm()


def compare_abs(a: QuadSurd, b: QuadSurd) -> int:
    """Exact sign of |a| - |b|."""
    return (abs(a) - abs(b)).sign()


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __pow__(self, n: int) -> "GaussianInt":
        if n < 0:
            raise DomainError("negative powers leave Z[i]")
        result = GaussianInt(1, 0)
        for _ in range(n):
            result = result * self
        return result

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        op = "-" if self.im < 0 else "+"
        return f"{self.re}{op}{abs(self.im)}i"
