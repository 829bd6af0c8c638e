from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

from sympy import isprime, primerange

from core.errors import DomainError
from core.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class PrimeClassFilter:
    """Keeps primes whose residue mod ``modulus`` is one of ``residues``."""

    modulus: int
    residues: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "residues", frozenset(r % self.modulus for r in self.residues))

    def accepts(self, p: int) -> bool:
        return p % self.modulus in self.residues

    def sorted_residues(self) -> Tuple[int, ...]:
        return tuple(sorted(self.residues))


@dataclass(frozen=True)
class ExcludedSet:
    """The finite set E of primes missing from the admissible prime set."""

    primes: Tuple[int, ...] = ()

    def __post_init__(self):
        normalized = tuple(sorted(set(int(p) for p in self.primes)))
        for p in normalized:
            if not isprime(p):
                logger.error("Excluded set member %d is not prime", p)
                raise DomainError(f"excluded set member {p} is not prime")
        object.__setattr__(self, "primes", normalized)

    @classmethod
    def of(cls, primes: Iterable[int]) -> "ExcludedSet":
        return cls(tuple(primes))

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def small(self, threshold: int) -> Tuple[int, ...]:
        return tuple(p for p in self.primes if p <= threshold)

    def large(self, threshold: int) -> Tuple[int, ...]:
        return tuple(p for p in self.primes if p > threshold)

    def divides(self, n: int) -> Optional[int]:
        """First excluded prime dividing ``n``, or None when n is E-free."""
        n = abs(n)
        for p in self.primes:
            if p > n:
                break
            if n % p == 0:
                return p
        return None

    def is_free(self, n: int) -> bool:
        return self.divides(n) is None


def sieve(limit: int, prime_filter: Optional[PrimeClassFilter] = None) -> List[int]:
    """Primes <= limit passing the optional residue filter, ascending."""
    if limit < 2:
        return []
    primes = primerange(2, limit + 1)
    if prime_filter is None:
        return list(primes)
    return [p for p in primes if prime_filter.accepts(p)]


def bad_residues(p: int, base: int, step: int) -> FrozenSet[int]:
    """Residues of z mod p for which p divides base + step*z."""
    if step % p == 0:
        return frozenset(range(p)) if base % p == 0 else frozenset()
    return frozenset({(-base * pow(step, -1, p)) % p})
