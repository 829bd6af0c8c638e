from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from arith.interval import Interval
from arith.scalar import ExpForm

QUAD = "quad"
EXAMPLE1 = "example1"
EXAMPLE2 = "example2"


@dataclass
class GapCertificate:
    """Exact proof that two elements are at least ``bound`` apart.

    ``intermediates`` holds the exact integers and surds of the identity used;
    ``direct_gap`` is the independently evaluated |b - b'| for cross-checking.
    """

    kind: str
    left: str
    right: str
    intermediates: Dict[str, Any]
    bound: Interval
    direct_gap: Optional[Interval] = None
    reduced_by: Optional[str] = None

    @property
    def passes(self) -> bool:
        return self.bound.lower >= 1


@dataclass
class AlphaCertificate:
    t: int
    delta: Fraction
    beta: Fraction
    alpha: ExpForm
    alpha_enclosure: Interval
    interval: Tuple[Fraction, Fraction]
    residual: Fraction
    listed_measure: Fraction
    survivors: List[Tuple[Fraction, Fraction]] = field(default_factory=list)
    verify_limit: Optional[int] = None
    empirical: Dict[str, Any] = field(default_factory=dict)
