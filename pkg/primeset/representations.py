"""Sum-of-two-squares and minimal Pell-norm representations of primes."""

from math import isqrt
from typing import Optional, Tuple

from sympy import isprime

from arith.quadratic import QuadSurd, surd_sign
from core.errors import CertificationError, DomainError
from core.logger import setup_logger

logger = setup_logger(__name__)


def _square_root(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def two_squares(p: int) -> Tuple[int, int]:
    """The unique (a, b) with 0 < a < b and a^2 + b^2 = p for a prime p = 1 mod 4."""
    if p % 4 != 1 or not isprime(p):
        logger.error("two_squares called with %d", p)
        raise DomainError(f"{p} is not a prime congruent to 1 mod 4")
    for a in range(1, isqrt(p // 2) + 1):
        b = _square_root(p - a * a)
        if b is not None and a < b:
            return a, b
    raise CertificationError(f"no two-squares decomposition found for {p}", {"p": p})


def unit_step(x: int, y: int) -> Tuple[int, int]:
    """Multiply x + y*sqrt(2) by the unit 1 - sqrt(2) and take absolute coordinates."""
    return abs(x - 2 * y), abs(y - x)


def _less(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    return surd_sign(a[0] - b[0], a[1] - b[1], 2) < 0


def _first_representation(p: int) -> Tuple[int, int]:
    for y in range(1, p + 1):
        for target in (2 * y * y + p, 2 * y * y - p):
            x = _square_root(target)
            if x:
                return x, y
    raise CertificationError(f"no Pell-norm representation of {p} found", {"p": p})


def min_pell_rep(p: int) -> QuadSurd:
    """Minimal x + y*sqrt(2) with x, y > 0 and |x^2 - 2y^2| = p.

    Walks the unit-reduction orbit down from the first representation found by
    scanning y; minimality is checked locally against both orbit neighbours.
    """
    if p % 8 not in (1, 7) or not isprime(p):
        logger.error("min_pell_rep called with %d", p)
        raise DomainError(f"{p} is not a prime congruent to +-1 mod 8")
    current = _first_representation(p)
    while True:
        step = unit_step(*current)
        if step[0] > 0 and step[1] > 0 and _less(step, current):
            current = step
        else:
            break

    x, y = current
    down = unit_step(x, y)
    up = (x + 2 * y, x + y)
    if _less(down, current) or _less(up, current):
        raise CertificationError(
            f"orbit minimum check failed for {p}", {"p": p, "rep": current, "down": down, "up": up}
        )
    rep = QuadSurd(2, x, y)
    if abs(rep.norm()) != p:
        raise CertificationError(f"representation of {p} has norm {rep.norm()}", {"p": p, "rep": current})
    logger.debug("min_pell_rep(%d) = %s", p, rep)
    return rep
