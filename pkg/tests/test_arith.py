import itertools
from fractions import Fraction

import pytest

from arith.compare import OrderKind, compare, exact_compare, format_scaled, to_decimal
from arith.constants import PI_CONST, constant_enclosure, log_const
from arith.interval import Interval
from arith.quadratic import GaussianInt, QuadSurd, compare_abs, quad_mul, quad_norm, surd_sign
from arith.scalar import ONE, ExpForm, LogForm, RatPow, Rational, Surd, multiply, power
from core.errors import DomainError


def test_interval_encloses_rationals():
    third = Interval.from_number(Fraction(1, 3), 64)
    assert third.contains(Fraction(1, 3))
    assert third.width > 0
    assert Interval.from_number(5, 64).is_exact()


def test_interval_endpoints_are_plain_fractions():
    root = Interval.from_number(2, 128).sqrt()
    for bound in (root.lower, root.upper, Interval.from_number(Fraction(1, 3), 64).lower):
        assert type(bound.numerator) is int
        assert type(bound.denominator) is int
    assert type(root.floor_log2()) is int


def test_interval_sqrt_squares_back():
    root = Interval.from_number(2, 128).sqrt()
    assert (root * root).contains(2)
    assert root.lower < Fraction(14143, 10000) and root.upper > Fraction(14142, 10000)


def test_interval_ordering_helpers():
    a = Interval.from_fractions(Fraction(1), Fraction(2), 64)
    b = Interval.from_fractions(Fraction(3), Fraction(4), 64)
    assert a.certainly_less(b)
    assert b.certainly_greater(a)
    assert not a.overlaps(b)
    assert (a - Fraction(3, 2)).contains_zero()
    assert a.hull(b).upper == 4


def test_certified_floor_refuses_straddling_interval():
    assert Interval.from_fractions(Fraction(7, 2), Fraction(15, 4), 64).certified_floor() == 3
    assert Interval.from_fractions(Fraction(5, 2), Fraction(7, 2), 64).certified_floor() is None


def test_pi_enclosure():
    pi = constant_enclosure(PI_CONST, 64)
    assert pi.lower < Fraction(314159266, 10 ** 8)
    assert pi.upper > Fraction(314159265, 10 ** 8)


def test_log_constant_rejects_small_arguments():
    with pytest.raises(DomainError):
        log_const(1)


def test_quad_surd_arithmetic():
    silver = QuadSurd(2, 1, 1)
    square = silver ** 2
    assert (square.x, square.y) == (3, 2)
    assert square.norm() == 1
    assert str(square) == "3+2*sqrt(2)"


def test_quad_mul_keeps_norm_multiplicative():
    a = QuadSurd(2, 1, 1)
    b = QuadSurd(2, 3, 2)
    product = quad_mul(a, b)
    assert (product.x, product.y) == (7, 5)
    assert quad_norm(product) == quad_norm(a) * quad_norm(b) == -1
    with pytest.raises(DomainError):
        quad_mul(a, QuadSurd(3, 2, 1))


def test_quad_surd_rejects_bad_radicand():
    with pytest.raises(DomainError):
        QuadSurd(4, 1, 1)
    with pytest.raises(DomainError):
        QuadSurd(2, 1, 1) ** -1


def test_surd_sign_and_absolute_comparison():
    assert surd_sign(Fraction(-1), Fraction(1), 2) == 1
    assert surd_sign(Fraction(3), Fraction(-2), 2) == 1
    assert surd_sign(Fraction(1), Fraction(-1), 2) == -1
    assert compare_abs(QuadSurd(2, 1, -1), QuadSurd(2, 0, 1)) == -1


def test_gaussian_norm_is_multiplicative():
    product = GaussianInt(2, 1) * GaussianInt(2, -1)
    assert (product.re, product.im) == (5, 0)
    assert GaussianInt(3, 2).norm() == 13


def test_multiply_collapses_to_rational():
    a = Surd(QuadSurd(2, 1, 1))
    b = Surd(QuadSurd(2, -1, 1))
    assert multiply(a, b) == ONE
    assert multiply(Rational(3), Rational(Fraction(1, 3))) == ONE


def test_power_stays_exact():
    assert power(Rational(4), Fraction(1, 2)) == Rational(2)
    assert power(Surd(QuadSurd(2, 1, 1)), 2) == Surd(QuadSurd(2, 3, 2))
    assert isinstance(power(Rational(2), Fraction(3, 2)), RatPow)


def test_rational_power_requires_positive_base():
    with pytest.raises(DomainError):
        RatPow(Fraction(0), Fraction(1, 2))


def test_exact_compare_settles_symbolic_cases():
    assert exact_compare(RatPow(4, Fraction(1, 2)), Rational(2)).is_equal
    assert exact_compare(Surd(QuadSurd(2, 1, 1)), Rational(Fraction(5, 2))).is_less
    assert exact_compare(RatPow(2, Fraction(1, 2)), Rational(Fraction(3, 2))) is None


@pytest.mark.parametrize(
    "a, b, kind",
    [
        (RatPow(2, Fraction(1, 2)), Rational(Fraction(3, 2)), OrderKind.LESS),
        (Surd(QuadSurd(2, 3, 2)), RatPow(2, Fraction(5, 2)), OrderKind.GREATER),
        (ExpForm(LogForm.build(1)), Rational(Fraction(27, 10)), OrderKind.GREATER),
        (ExpForm(LogForm.build(0, {log_const(3): Fraction(1)})), Rational(3), OrderKind.EQUAL),
    ],
)
def test_compare(a, b, kind):
    assert compare(a, b).kind is kind
    if kind is not OrderKind.EQUAL:
        assert compare(b, a).kind is not kind


def test_compare_reports_unresolved_instead_of_guessing():
    # 2a^2 - 3b^2 = -1, so a*sqrt(2) and b*sqrt(3) agree to about 2*log2(a) bits
    a, b = 1, 1
    for _ in range(10):
        a, b = 5 * a + 6 * b, 4 * a + 5 * b
    assert 2 * a * a - 3 * b * b == -1
    left, right = Surd(QuadSurd(2, 0, a)), Surd(QuadSurd(3, 0, b))
    assert compare(left, right, 64).is_unresolved
    assert compare(left, right, 64).precision == 64
    assert compare(left, right, 512).is_less


def test_to_decimal():
    value = to_decimal(Surd(QuadSurd(2, 0, 1)), 10)
    assert value.text == "1.4142135624"
    assert value.certified
    assert to_decimal(Rational(Fraction(1, 4)), 3).text == "0.250"


def test_format_scaled():
    assert format_scaled(-5, 3) == "-0.005"
    assert format_scaled(12345, 2) == "123.45"


@pytest.mark.parametrize("d", [2, 3, 5])
def test_quad_norm_is_multiplicative_on_a_grid(d):
    grid = [QuadSurd(d, x, y) for x in range(-20, 21, 5) for y in range(-20, 21, 5)]
    for a, b in itertools.product(grid, repeat=2):
        assert quad_norm(quad_mul(a, b)) == quad_norm(a) * quad_norm(b)


ASCENDING = [
    Rational(Fraction(7, 5)),
    Rational(Fraction(3, 2)),
    RatPow(2, Fraction(2, 3)),
    Surd(QuadSurd(3, 0, 1)),
    RatPow(5, Fraction(1, 2)),
    Surd(QuadSurd(2, 1, 1)),
    ExpForm.build(1),
    ExpForm.build(0, {PI_CONST: Fraction(1)}),
]


def test_compare_is_antisymmetric_and_transitive():
    size = len(ASCENDING)
    table = {}
    for (i, a), (j, b) in itertools.product(enumerate(ASCENDING), repeat=2):
        order = compare(a, b)
        assert not order.is_unresolved
        assert compare(b, a).kind is order.reversed().kind
        table[i, j] = order.kind
    for i, j, k in itertools.product(range(size), repeat=3):
        if table[i, j] is OrderKind.LESS and table[j, k] is OrderKind.LESS:
            assert table[i, k] is OrderKind.LESS
    assert all(table[i, i + 1] is OrderKind.LESS for i in range(size - 1))


@pytest.mark.parametrize("value", ASCENDING)
def test_enclosures_tighten_with_precision(value):
    widths = [value.enclose(prec).width for prec in (64, 128, 256, 512)]
    assert all(later <= earlier for earlier, later in zip(widths, widths[1:]))
