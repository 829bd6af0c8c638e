"""Gap-collapsing search for a rational alpha = a/b.

With a^m u - b^m v = d and both u, v odd, every x = u + 2z b^m,
y = v + 2z a^m satisfies |alpha^m x - y| = d / b^m < delta; the scan over z
only has to dodge multiples of the excluded primes.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional

from arith.interval import Interval
from attacks.density import density_diag
from core.errors import DomainError, NotFoundError, PreconditionError
from core.logger import setup_logger
from interfaces.i_attack import IAttack
from models.witness import RATIONAL_CASE, SieveConfig, Witness
from primeset.sieve import ExcludedSet, bad_residues

logger = setup_logger(__name__)

DEFAULT_Z_MAX = 100_000


class RationalAttack(IAttack):
    def __init__(
        self,
        excluded: ExcludedSet,
        a: int,
        b: int,
        delta,
        z_max: int = DEFAULT_Z_MAX,
        threshold: Optional[int] = None,
        workers: int = 1,
    ):
        self.delta = Fraction(delta)
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        if b < 1 or a % b == 0:
            logger.error("Rational attack on integer alpha %d/%d", a, b)
            raise PreconditionError(f"alpha = {a}/{b} is an integer")
        if gcd(a, b) != 1:
            raise DomainError(f"a={a} and b={b} must be coprime")
        if not a > b >= 2:
            raise DomainError("the attack needs a > b >= 2")
        self.excluded = excluded
        self.a, self.b = a, b
        self.z_max = z_max
        self.threshold = threshold if threshold is not None else density_diag(excluded).suggested_t
        self.workers = max(1, workers)

        self.m = 1
        while not self.delta * b ** self.m > 2:
            self.m += 1
        self.d = 2 if (a * b) % 2 else 1
        self.a_m, self.b_m = a ** self.m, b ** self.m
        self.u, self.v, self.shift = self._odd_bezout()

    def _odd_bezout(self):
        u0 = self.d * pow(self.a_m, -1, self.b_m) % self.b_m
        v0 = (self.a_m * u0 - self.d) // self.b_m
        for t in range(4):
            u, v = u0 + t * self.b_m, v0 + t * self.a_m
            if u % 2 and v % 2:
                return u, v, t
        raise DomainError(f"no odd Bezout pair for {self.a}^{self.m} u - {self.b}^{self.m} v = {self.d}")

    def _sieve_table(self) -> Dict[int, FrozenSet[int]]:
        table = {}
        for p in self.excluded.small(self.threshold):
            bad = bad_residues(p, self.u, 2 * self.b_m) | bad_residues(p, self.v, 2 * self.a_m)
            table[p] = bad
        return table

    def _scan(self, start: int, stop: int, table: Dict[int, FrozenSet[int]]) -> Optional[int]:
        large = self.excluded.large(self.threshold)
        for z in range(start, stop):
            if any(z % p in bad for p, bad in table.items()):
                continue
            x = self.u + 2 * z * self.b_m
            y = self.v + 2 * z * self.a_m
            if any(x % p == 0 or y % p == 0 for p in large):
                logger.debug("z=%d rejected by trial division", z)
                continue
            return z
        return None

    def _chunks(self) -> List[range]:
        total = self.z_max + 1
        size = max(1, -(-total // self.workers))
        return [range(lo, min(lo + size, total)) for lo in range(0, total, size)]

    def search(self) -> Witness:
        table = self._sieve_table()
        if self.workers == 1:
            found = [self._scan(0, self.z_max + 1, table)]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                found = list(pool.map(lambda r: self._scan(r.start, r.stop, table), self._chunks()))
        hits = [z for z in found if z is not None]
        if not hits:
            logger.info("Rational attack exhausted z <= %d", self.z_max)
            raise NotFoundError(
                f"no admissible z <= {self.z_max}",
                {"z_max": self.z_max, "m": self.m, "u": self.u, "v": self.v, "d": self.d},
            )
        z = min(hits)
        x = self.u + 2 * z * self.b_m
        y = self.v + 2 * z * self.a_m
        if self.a_m * x - self.b_m * y != self.d or not (self.excluded.is_free(x) and self.excluded.is_free(y)):
            raise NotFoundError("witness failed revalidation", {"z": z, "x": x, "y": y})
        gap = Fraction(self.d, self.b_m)
        witness = Witness(
            case=RATIONAL_CASE,
            delta=self.delta,
            n_prime=x,
            m_prime=y,
            gap=Interval.from_number(gap, 64),
            sieve=SieveConfig(self.excluded, max(2, self.threshold), (self.z_max + 1,)),
            exact_gap=gap,
            provenance={"a": self.a, "b": self.b, "m": self.m, "u": self.u, "v": self.v, "d": self.d, "z": z, "t": self.shift},
        )
        logger.info("Rational attack: m=%d z=%d gives x=%d y=%d gap %s", self.m, z, x, y, gap)
        return witness


def attack_rational(excluded: ExcludedSet, a: int, b: int, delta, **kwargs) -> Witness:
    return RationalAttack(excluded, a, b, delta, **kwargs).search()
