"""Exact per-pair gap certificates for the three lacunary constructions.

Each certificate is computed from the construction's algebraic identity and
then cross-checked against an independent interval evaluation of the gap.
"""

from fractions import Fraction
from typing import List, Optional, Tuple

from arith.compare import compare, difference_enclosure
from arith.interval import Interval
from arith.quadratic import QuadSurd, compare_abs
from arith.scalar import Rational, RealScalar, Surd, multiply, power
from constructions.systems import Example1System, Example2System, QuadAlphaSystem
from core.config import Settings
from core.errors import CertificationError, DomainError
from core.logger import setup_logger
from core.semigroup import Element, GeneratorSet, SemigroupEnumerator, reduce_pair
from interfaces.i_certifier import ICertifier
from models.certificate import EXAMPLE1, EXAMPLE2, QUAD, GapCertificate

logger = setup_logger(__name__)

# precision used for exact-surd bounds, which need no escalation
_SURD_PRECISION = 256


def _direct_gap(x: RealScalar, y: RealScalar, budget: Optional[int] = None) -> Interval:
    settings = Settings.from_env(budget)
    gap = None
    for prec in settings.precisions(budget):
        gap = abs(difference_enclosure(x, y, prec))
        if gap.is_finite and (gap.is_exact() or gap.width * 2 ** 64 <= gap.lower):
            break
    return gap


def _cross_check(cert: GapCertificate) -> GapCertificate:
    if cert.direct_gap is not None and cert.direct_gap.certainly_less(cert.bound.lower):
        logger.error("Certificate bound exceeds the direct gap for %s / %s", cert.left, cert.right)
        raise CertificationError(
            "certified bound exceeds the directly evaluated gap",
            {"left": cert.left, "right": cert.right, "bound": cert.bound.to_str(), "direct": cert.direct_gap.to_str()},
        )
    return cert


def certify_quad_gap(system: QuadAlphaSystem, k: int, m: int, n: int, budget: Optional[int] = None) -> GapCertificate:
    """Certify |alpha^k m^2 - n^2| > 1 through the norm identity in Z[sqrt(q)]."""
    if k < 0 or m < 1 or n < 1:
        raise DomainError("certify_quad_gap needs k >= 0 and m, n >= 1")
    left, right = f"alpha^{k}*{m}^2", f"{n}^2"
    direct = _direct_gap(multiply(power(system.alpha, k), Rational(m * m)), Rational(n * n), budget)

    if k == 0:
        integer = m * m - n * n
        if integer == 0:
            raise CertificationError("m^2 - n^2 vanishes", {"m": m, "n": n})
        bound = Interval.from_number(abs(integer), _SURD_PRECISION)
        cert = GapCertificate(QUAD, left, right, {"k": 0, "m": m, "n": n, "I": integer, "ratio": "1"}, bound, direct)
        return _cross_check(cert)

    q = system.q
    beta = system.root ** k
    v, u = beta.x, beta.y
    integer = (v * m - n) ** 2 - (u * m) ** 2 * q
    trace = {"k": k, "m": m, "n": n, "u": u, "v": v, "q": q, "I": integer}
    if integer == 0:
        logger.error("Norm factor vanished for k=%d m=%d n=%d", k, m, n)
        raise CertificationError("norm factor (vm-n)^2 - (um)^2 q vanishes", trace)

    numerator = QuadSurd(q, v * m + n, u * m)
    denominator = QuadSurd(q, v * m - n, -u * m)
    if compare_abs(numerator, denominator) <= 0:
        raise CertificationError("numerator does not exceed the denominator in absolute value", trace)
    # (beta*m + n)(beta*m - n) = alpha^k m^2 - n^2
    gap_surd = numerator * QuadSurd(q, v * m - n, u * m)
    bound = abs(gap_surd).enclose(_SURD_PRECISION)
    if not bound.lower > 1:
        raise CertificationError("quad certificate bound is not above 1", trace)
    trace.update(
        {
            "numerator": str(numerator),
            "denominator": str(denominator),
            "ratio": f"({gap_surd})/({integer})",
            "gap": str(gap_surd),
        }
    )
    return _cross_check(GapCertificate(QUAD, left, right, trace, bound, direct))


def certify_example1_pair(system: Example1System, m: int, n: int, budget: Optional[int] = None) -> GapCertificate:
    """Certify |g(m) - g(n)| > 1 from f(m)^2 - f(n)^2 = (f(m)+f(n))(f(m)-f(n))."""
    if m == n:
        raise DomainError("certify_example1_pair needs distinct m and n")
    fm, fn = system.f_of(m), system.f_of(n)
    diff = fm - fn
    integer = diff.norm()
    trace = {"m": m, "n": n, "u": fm.x, "v": fm.y, "x": fn.x, "y": fn.y, "I": integer}
    if integer == 0:
        logger.error("Example 1 norm factor vanished for m=%d n=%d", m, n)
        raise CertificationError("(u-x)^2 - 2(v-y)^2 vanishes", trace)
    numerator = fm + fn
    denominator = diff.conjugate()
    if compare_abs(numerator, denominator) <= 0:
        raise CertificationError("numerator does not exceed the denominator in absolute value", trace)
    gap_surd = numerator * diff
    bound = abs(gap_surd).enclose(_SURD_PRECISION)
    if not bound.lower > 1:
        raise CertificationError("example 1 certificate bound is not above 1", trace)
    trace.update({"numerator": str(numerator), "denominator": str(denominator), "gap": str(gap_surd)})
    direct = _direct_gap(Surd(system.g_of(m)), Surd(system.g_of(n)), budget)
    return _cross_check(GapCertificate(EXAMPLE1, f"g({m})", f"g({n})", trace, bound, direct))


def certify_example2_pair(system: Example2System, m: int, n: int, budget: Optional[int] = None) -> GapCertificate:
    """Certify |g(m) - g(n)| >= D >= 1 with D the lattice determinant of rho(m), rho(n)."""
    if m == n:
        raise DomainError("certify_example2_pair needs distinct m and n")
    rho_m, rho_n = system.rho_of(m), system.rho_of(n)
    cross = (rho_m * rho_n.conjugate()).im
    determinant = abs(cross)
    trace = {"m": m, "n": n, "rho_m": str(rho_m), "rho_n": str(rho_n), "D": determinant}
    if determinant == 0:
        logger.error("Lattice determinant vanished for m=%d n=%d", m, n)
        raise CertificationError("rho(m)/rho(n) is real", trace)

    g_m, g_n = system.g_of(m), system.g_of(n)
    for value, arg in ((g_m, m), (g_n, n)):
        # f(1) = 0 = log 1 exactly; the bound chain only needs f(arg) >= log arg
        if arg > 1 and not compare(value, Rational(arg), budget).is_greater:
            raise CertificationError(f"f({arg}) > log {arg} not certified", trace)

    exponent_gap = system.f_of(m) - system.f_of(n)
    settings = Settings.from_env(budget)
    sine_ok = False
    for prec in settings.precisions(budget):
        angle = exponent_gap.enclose(prec)
        sine = angle.sin()
        exact_sine = Interval.from_number(cross, prec) / Interval.from_number(m * n, prec).sqrt()
        if not sine.overlaps(exact_sine):
            trace.update({"sin_delta": sine.to_str(), "expected": exact_sine.to_str()})
            raise CertificationError("sin(f(m) - f(n)) disagrees with D/sqrt(mn)", trace)
        if abs(angle).lower >= abs(sine).upper:
            sine_ok = True
            break
    if not sine_ok:
        raise CertificationError("|f(m) - f(n)| >= |sin(f(m) - f(n))| undecided at the precision cap", trace)

    direct = _direct_gap(g_m, g_n, budget)
    if not direct.lower >= determinant:
        raise CertificationError("direct gap below the lattice determinant", dict(trace, direct=direct.to_str()))
    trace.update(
        {
            "delta": angle.to_str(30),
            "sin_delta": sine.to_str(30),
            "sqrt_mn": Interval.from_number(m * n, prec).sqrt().to_str(30),
        }
    )
    bound = Interval.from_number(determinant, _SURD_PRECISION)
    return _cross_check(GapCertificate(EXAMPLE2, f"g({m})", f"g({n})", trace, bound, direct))


class QuadCertifier(ICertifier):
    def __init__(self, system: QuadAlphaSystem, budget: Optional[int] = None):
        self.system = system
        self.budget = budget

    def certify(self, first: Element, second: Element) -> GapCertificate:
        a, b, shared = reduce_pair(first, second, self.system.generator_set.generators)
        k1, m1 = self.system.decompose(a.exponents)
        k2, m2 = self.system.decompose(b.exponents)
        if k2 > 0:
            cert = certify_quad_gap(self.system, k2, m2, m1, self.budget)
        else:
            cert = certify_quad_gap(self.system, k1, m1, m2, self.budget)
        cert.reduced_by = str(shared) if shared.entries else None
        return cert


class Example1Certifier(ICertifier):
    def __init__(self, system: Example1System, budget: Optional[int] = None):
        self.system = system
        self.budget = budget

    def certify(self, first: Element, second: Element) -> GapCertificate:
        a, b, shared = reduce_pair(first, second, self.system.generator_set.generators)
        cert = certify_example1_pair(
            self.system, self.system.integer_of(a.exponents), self.system.integer_of(b.exponents), self.budget
        )
        cert.reduced_by = str(shared) if shared.entries else None
        return cert


class Example2Certifier(ICertifier):
    def __init__(self, system: Example2System, budget: Optional[int] = None):
        self.system = system
        self.budget = budget

    def certify(self, first: Element, second: Element) -> GapCertificate:
        a, b, shared = reduce_pair(first, second, self.system.generator_set.generators)
        cert = certify_example2_pair(
            self.system, self.system.integer_of(a.exponents), self.system.integer_of(b.exponents), self.budget
        )
        cert.reduced_by = str(shared) if shared.entries else None
        return cert


def smallest_gap_pairs(generators: GeneratorSet, limit, count: int, budget: Optional[int] = None) -> List[Tuple[Element, Element]]:
    """The ``count`` consecutive pairs with the smallest certified gap lower bounds."""
    pairs: List[Tuple[Fraction, Element, Element]] = []
    previous = None
    for element in SemigroupEnumerator(generators, limit, budget):
        if previous is not None:
            gap = _direct_gap(previous.value, element.value, budget)
            pairs.append((gap.lower, previous, element))
        previous = element
    pairs.sort(key=lambda item: (item[0], item[1].exponents.entries))
    logger.debug("Ranked %d consecutive pairs", len(pairs))
    return [(lo_pair, hi_pair) for _, lo_pair, hi_pair in pairs[:count]]


def certify_pairs(certifier: ICertifier, pairs: List[Tuple[Element, Element]]) -> List[GapCertificate]:
    certificates = []
    for first, second in pairs:
        certificates.append(certifier.certify(first, second))
    logger.info("Certified %d pairs", len(certificates))
    return certificates
