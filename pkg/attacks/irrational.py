"""Gap-collapsing search for an irrational alpha via convergent mediants.

For consecutive convergents a_lo/r_lo < alpha < a_hi/r_hi the mediant
(x a_lo + y a_hi)/(x r_lo + y r_hi) lies in the same interval, so
|alpha n' - m'| < n' / (r_lo r_hi) with n' = x r_lo + y r_hi and
m' = x a_lo + y a_hi. Small x, y keep that below delta.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Dict, FrozenSet, List, Optional, Tuple

from approx.continued_fraction import Convergent, convergents, expand
from arith.compare import compare, difference_enclosure
from arith.interval import Interval
from arith.scalar import ONE, Rational, RealScalar, multiply
from attacks.density import density_diag
from core.config import Settings
from core.errors import CertificationError, DomainError, NotFoundError, PreconditionError
from core.logger import setup_logger
from interfaces.i_attack import IAttack
from models.witness import IRRATIONAL_CASE, SieveConfig, Witness
from primeset.sieve import ExcludedSet, bad_residues

logger = setup_logger(__name__)

DEFAULT_MAX_K = 40


@dataclass(frozen=True)
class ConvergentPair:
    k: int
    lower: Convergent
    upper: Convergent

    @property
    def determinant(self) -> int:
        return self.upper.a * self.lower.r - self.lower.a * self.upper.r

    def mediant(self, x: int, y: int) -> Tuple[int, int]:
        """(n', m') for the weights x on the lower and y on the upper convergent."""
        return x * self.lower.r + y * self.upper.r, x * self.lower.a + y * self.upper.a

    def parity(self) -> Tuple[int, int]:
        """Parities of (x, y) that make both n' and m' odd."""
        for px, py in ((1, 0), (0, 1), (1, 1)):
            n, m = self.mediant(px, py)
            if n % 2 and m % 2:
                return px, py
        raise CertificationError("no parity class gives odd mediant terms", {"k": self.k})


@dataclass
class _Probe:
    pair: ConvergentPair
    x: int
    y: int
    n_prime: int
    m_prime: int
    gap: Interval
    hit: bool = False


class IrrationalAttack(IAttack):
    def __init__(
        self,
        excluded: ExcludedSet,
        alpha: RealScalar,
        delta,
        max_k: int = DEFAULT_MAX_K,
        threshold: Optional[int] = None,
        workers: int = 1,
        budget: Optional[int] = None,
    ):
        self.delta = Fraction(delta)
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        if alpha.exact_rational() is not None:
            raise PreconditionError(f"alpha = {alpha} is rational; use the rational attack")
        if not compare(alpha, ONE, budget).is_greater:
            raise DomainError(f"alpha = {alpha} is not certified > 1")
        self.excluded = excluded
        self.alpha = alpha
        self.max_k = max_k
        self.threshold = threshold if threshold is not None else density_diag(excluded).suggested_t
        self.workers = max(1, workers)
        self.budget = budget
        self.best: Optional[_Probe] = None

    def _pairs(self) -> List[ConvergentPair]:
        cf = expand(self.alpha, self.max_k + 2, self.budget)
        if cf.exhausted:
            raise PreconditionError(f"continued fraction of {self.alpha} terminates")
        convs = convergents(cf)
        pairs = []
        for k in range(min(self.max_k + 1, len(convs) - 1)):
            first, second = convs[k], convs[k + 1]
            if first.value < second.value:
                pairs.append(ConvergentPair(k, first, second))
            else:
                pairs.append(ConvergentPair(k, second, first))
        if len(pairs) <= self.max_k:
            logger.warning("Only %d convergent pairs certified for %s", len(pairs), self.alpha)
        return pairs

    def _gap(self, n_prime: int, m_prime: int) -> Interval:
        scaled = multiply(self.alpha, Rational(n_prime))
        settings = Settings.from_env(self.budget)
        gap = None
        for prec in settings.precisions(self.budget):
            gap = abs(difference_enclosure(scaled, Rational(m_prime), prec))
            if gap.is_finite and (gap.certainly_less(self.delta) or gap.lower >= self.delta):
                break
        return gap

    @staticmethod
    def _y_allowed(y: int, small: Tuple[int, ...]) -> bool:
        # parity already handles 2
        return all(p == 2 or y % p for p in small)

    def _x_table(self, pair: ConvergentPair, y: int, small: Tuple[int, ...]) -> Dict[int, FrozenSet[int]]:
        table = {}
        for p in small:
            table[p] = bad_residues(p, y * pair.upper.a, pair.lower.a) | bad_residues(p, y * pair.upper.r, pair.lower.r)
        return table

    def _search_pair(self, pair: ConvergentPair) -> Optional[_Probe]:
        if abs(pair.determinant) != 1:
            raise CertificationError("consecutive convergents with determinant != +-1", {"k": pair.k})
        px, py = pair.parity()
        x_bound = max(2, floor(self.delta * pair.upper.r / 2))
        y_bound = max(2, floor(self.delta * pair.lower.r / 2))
        small = self.excluded.small(self.threshold)
        best = None
        for y in range(py or 2, y_bound + 1, 2):
            if not self._y_allowed(y, small):
                continue
            table = self._x_table(pair, y, small)
            for x in range(px or 2, x_bound + 1, 2):
                if any(x % p in bad for p, bad in table.items()):
                    continue
                n_prime, m_prime = pair.mediant(x, y)
                if not (self.excluded.is_free(n_prime) and self.excluded.is_free(m_prime)):
                    continue
                mediant = Fraction(m_prime, n_prime)
                if not pair.lower.value < mediant < pair.upper.value:
                    raise CertificationError(
                        "mediant escaped its convergent interval",
                        {"k": pair.k, "x": x, "y": y, "mediant": str(mediant)},
                    )
                gap = self._gap(n_prime, m_prime)
                hit = gap.certainly_less(self.delta)
                probe = _Probe(pair, x, y, n_prime, m_prime, gap, hit)
                if hit:
                    return probe
                if best is None or gap.lower < best.gap.lower:
                    best = probe
        if best is not None:
            logger.debug("k=%d best gap %s above delta", pair.k, best.gap.to_str(8))
        return best

    def _witness(self, probe: _Probe) -> Witness:
        pair = probe.pair
        return Witness(
            case=IRRATIONAL_CASE,
            delta=self.delta,
            n_prime=probe.n_prime,
            m_prime=probe.m_prime,
            gap=probe.gap,
            sieve=SieveConfig(
                self.excluded,
                max(2, self.threshold),
                (max(2, floor(self.delta * pair.upper.r / 2)), max(2, floor(self.delta * pair.lower.r / 2))),
            ),
            provenance={
                "k": pair.k,
                "lower": str(pair.lower),
                "upper": str(pair.upper),
                "x": probe.x,
                "y": probe.y,
                "parity": "x%d,y%d" % pair.parity(),
            },
        )

    def search(self) -> Witness:
        pairs = self._pairs()
        deepest = -1
        step = self.workers
        pool = ThreadPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        try:
            for start in range(0, len(pairs), step):
                batch = pairs[start : start + step]
                results = list(pool.map(self._search_pair, batch)) if pool else [self._search_pair(p) for p in batch]
                for pair, probe in zip(batch, results):
                    deepest = pair.k
                    if probe is None:
                        continue
                    if probe.hit:
                        witness = self._witness(probe)
                        logger.info(
                            "Irrational attack: k=%d x=%d y=%d gives n'=%d m'=%d gap %s",
                            pair.k, probe.x, probe.y, probe.n_prime, probe.m_prime, probe.gap.to_str(8),
                        )
                        return witness
                    if self.best is None or probe.gap.lower < self.best.gap.lower:
                        self.best = probe
        finally:
            if pool is not None:
                pool.shutdown()
        diagnostics = {"deepest_k": deepest, "max_k": self.max_k}
        if self.best is not None:
            diagnostics.update(
                {
                    "best_gap": self.best.gap.to_str(12),
                    "best_n_prime": self.best.n_prime,
                    "best_m_prime": self.best.m_prime,
                }
            )
        logger.info("Irrational attack found no witness up to k=%d", deepest)
        raise NotFoundError(f"no witness below delta={self.delta} up to k={deepest}", diagnostics)


def attack_irrational(excluded: ExcludedSet, alpha: RealScalar, delta, **kwargs) -> Witness:
    return IrrationalAttack(excluded, alpha, delta, **kwargs).search()
