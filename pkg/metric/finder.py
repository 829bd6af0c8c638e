"""Choose alpha = e^beta so that G' plus alpha stays delta-lacunary.

The scale t is the smallest integer whose measure bound leaves most of
[t, 2t] free; beta is the centre of the widest scale interval no listed
triple excludes.
"""

from fractions import Fraction
from typing import Optional

from arith.interval import Interval
from arith.scalar import ExpForm, LogForm
from core.errors import CertificationError, NotFoundError, PreconditionError, ResidualCollisionError
from core.gaps import gap_report
from core.logger import setup_logger
from core.semigroup import GeneratorSet
from metric.bad_intervals import BadIntervalSet, bad_intervals, harmonic_constant
from metric.sqrt_sum import sqrt_sum
from models.certificate import AlphaCertificate

logger = setup_logger(__name__)

DEFAULT_CUTOFF = 10 ** 6
DEFAULT_MAX_T = 64
DEFAULT_SAFETY = 4

_PREC = 128


def measure_bound(delta: Fraction, t: int, s_upper: Fraction) -> Interval:
    """6 c delta e^(-t/2) S^2 with c = 1 + log 6."""
    return harmonic_constant(_PREC) * 6 * delta * Interval.from_number(Fraction(-t, 2), _PREC).exp() * s_upper * s_upper


def choose_scale(delta: Fraction, s_upper: Fraction, max_t: int = DEFAULT_MAX_T, safety: int = DEFAULT_SAFETY) -> int:
    floor_t = int(4 * delta) + 1
    for t in range(max(1, floor_t), max_t + 1):
        if not t > 4 * delta:
            continue
        if 3 * delta > 1 and not Interval.from_number(3 * delta, _PREC).log().certainly_less(t):
            continue
        if measure_bound(delta, t, s_upper).upper < Fraction(t, safety):
            return t
    raise NotFoundError(
        f"no admissible scale t <= {max_t}",
        {"max_t": max_t, "s_upper": str(s_upper), "bound_at_max_t": measure_bound(delta, max_t, s_upper).to_str(12)},
    )


def _pick_beta(lo: Fraction, hi: Fraction) -> Fraction:
    """A short rational near the centre of [lo, hi] whose exponential is not an integer."""
    width = hi - lo
    centre = (lo + hi) / 2
    for offset in (Fraction(0), width / 8, -width / 8, width / 5, -width / 5):
        candidate = centre + offset
        short = candidate.limit_denominator(2 ** 20)
        beta = short if abs(short - candidate) < width / 16 else candidate
        alpha = Interval.from_number(beta, _PREC).exp()
        if alpha.certified_floor() is not None and alpha.lower != alpha.certified_floor():
            return beta
        logger.debug("beta=%s sits on an integer alpha, nudging", beta)
    raise NotFoundError("could not place beta away from integers", {"lo": str(lo), "hi": str(hi)})


def find_alpha(
    generators: Optional[GeneratorSet],
    delta,
    verify_limit: int,
    cutoff: Optional[int] = None,
    max_t: int = DEFAULT_MAX_T,
    safety: int = DEFAULT_SAFETY,
    budget: Optional[int] = None,
) -> AlphaCertificate:
    delta = Fraction(delta)
    cutoff = cutoff if cutoff is not None else max(verify_limit, DEFAULT_CUTOFF)
    has_generators = generators is not None and len(generators) > 0

    if has_generators:
        base = gap_report(generators, verify_limit, delta, budget)
        if not base.is_lacunary:
            logger.error("G' is not %s-lacunary up to %d", delta, verify_limit)
            raise PreconditionError(
                f"G' is not {delta}-lacunary up to {verify_limit}: "
                f"{len(base.violations)} violations, {base.unresolved_count} unresolved"
            )

    bound = sqrt_sum(generators, cutoff, budget)
    t = choose_scale(delta, bound.s_upper, max_t, safety)
    logger.info("find_alpha: S in [%.6f, %.6f], scale t=%d", float(bound.s_lower), float(bound.s_upper), t)
    bad: BadIntervalSet = bad_intervals(generators, delta, t, cutoff, budget)

    widest = bad.widest_survivor()
    if widest is None or widest[1] - widest[0] <= 2 * bad.residual:
        raise NotFoundError(
            "no surviving scale interval wider than twice the residual",
            {"t": t, "residual": str(bad.residual), "survivors": len(bad.survivors), "listed": str(bad.listed_measure)},
        )
    beta = _pick_beta(*widest)
    alpha = ExpForm(LogForm.build(beta))
    system = generators.with_generator(alpha, f"{generators.label}+alpha", budget) if has_generators else GeneratorSet.build([alpha], "alpha", budget)
    report = gap_report(system, verify_limit, delta, budget)
    alpha_within_verify = not alpha.enclose(_PREC).certainly_greater(verify_limit)
    if not alpha_within_verify:
        logger.warning("alpha = e^%s exceeds the verify limit %d; the gap check only covers G'", beta, verify_limit)

    certificate = AlphaCertificate(
        t=t,
        delta=delta,
        beta=beta,
        alpha=alpha,
        alpha_enclosure=alpha.enclose(_PREC),
        interval=widest,
        residual=bad.residual,
        listed_measure=bad.listed_measure,
        survivors=list(bad.survivors),
        verify_limit=verify_limit,
        empirical={
            "count": report.count,
            "violations": len(report.violations),
            "unresolved": report.unresolved_count,
            "min_gap": report.min_gap.to_str(20) if report.min_gap is not None else None,
            "measure_bound": str(bad.measure_bound),
            "triples": len(bad.intervals),
            "alpha_within_verify": alpha_within_verify,
        },
    )
    if report.violations:
        worst = report.violations[0]
        trace = {"beta": str(beta), "lower": str(worst.lower.exponents), "upper": str(worst.upper.exponents)}
        if worst.upper.value.enclose(_PREC).certainly_greater(cutoff):
            logger.error("Residual collision for beta=%s above cutoff %d", beta, cutoff)
            raise ResidualCollisionError("violation in the region covered only by the residual bound", trace)
        logger.error("Empirical gap check failed for beta=%s", beta)
        raise CertificationError("surviving beta produced a gap below delta", trace)
    logger.info("find_alpha: beta=%s in [%s, %s], %d elements checked", beta, float(widest[0]), float(widest[1]), report.count)
    return certificate
