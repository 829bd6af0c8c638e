from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from arith.interval import Interval
from core.errors import DomainError
from primeset.sieve import ExcludedSet

RATIONAL_CASE = "rational"
IRRATIONAL_CASE = "irrational"


@dataclass(frozen=True)
class SieveConfig:
    excluded: ExcludedSet
    threshold: int = 2
    bounds: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.threshold < 2:
            raise DomainError("sieve threshold T must be at least 2")
        if any(b <= 0 for b in self.bounds):
            raise DomainError("search bounds must be positive")


@dataclass
class Witness:
    """Two elements of the semigroup closer than delta.

    Rational case: |alpha^m * n_prime - m_prime| with m in the provenance.
    Irrational case: |alpha * n_prime - m_prime|.
    """

    case: str
    delta: Fraction
    n_prime: int
    m_prime: int
    gap: Interval
    sieve: SieveConfig
    exact_gap: Optional[Fraction] = None
    provenance: Dict[str, Any] = field(default_factory=dict)

    def selection_key(self) -> Tuple[int, ...]:
        if self.case == RATIONAL_CASE:
            return (self.provenance.get("z", 0),)
        return (self.provenance.get("k", 0), self.provenance.get("y", 0), self.provenance.get("x", 0))
