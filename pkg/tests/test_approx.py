from fractions import Fraction

import pytest

from approx.continued_fraction import (
    convergents,
    determinant,
    expand,
    expand_until,
    intermediate_fractions,
    max_partial_quotient,
)
from approx.power_attack import INTERMEDIATE, power_attack, power_attack_trace
from arith.quadratic import QuadSurd
from arith.scalar import ExpForm, RatPow, Rational, Surd
from core.errors import DomainError, NotFoundError


def test_expand_silver_ratio(silver_ratio):
    cf = expand(silver_ratio, 6)
    assert cf.certified_quotients() == (2, 2, 2, 2, 2, 2)
    assert str(cf) == "[2;2,2,2,2,2]"


def test_expand_sqrt2_on_installed_backend():
    cf = expand(Surd(QuadSurd(2, 0, 1)), 6)
    assert cf.certified_quotients() == (1, 2, 2, 2, 2, 2)
    assert all(type(q) is int for q in cf.quotients)


def test_expand_rational_terminates():
    cf = expand(Rational(Fraction(355, 113)), 10)
    assert cf.quotients == (3, 7, 16)
    assert cf.exhausted


def test_convergents_and_determinants(silver_ratio):
    convs = convergents(expand(silver_ratio, 4))
    assert [(c.a, c.r) for c in convs] == [(2, 1), (5, 2), (12, 5), (29, 12)]
    for first, second in zip(convs, convs[1:]):
        assert abs(determinant(first, second)) == 1


def test_intermediate_fractions(silver_ratio):
    semis = intermediate_fractions(expand(silver_ratio, 4))
    assert [(c.a, c.r) for c in semis] == [(7, 3), (17, 7)]


def test_max_partial_quotient(silver_ratio):
    assert max_partial_quotient(expand(silver_ratio, 8)) == 2
    assert max_partial_quotient(expand(Rational(3), 4)) == 0


def test_expand_until_reaches_denominator(silver_ratio):
    cf = expand_until(silver_ratio, 1000)
    assert convergents(cf)[-1].r > 1000


def test_power_attack_finds_small_residual():
    result = power_attack(Rational(2), Fraction(3, 2), Fraction(1, 10), 100)
    assert (result.a, result.b) == (100, 63)
    assert result.residual.upper < Fraction(94, 1000)
    assert result.residual.lower > Fraction(93, 1000)
    assert not result.best.exact_zero


def test_power_attack_flags_exact_power_ratio():
    result = power_attack(Rational(8), Fraction(3, 2), Fraction(1, 10), 10)
    assert (result.a, result.b) == (4, 1)
    assert result.best.exact_zero


def test_power_attack_not_found_carries_best_candidate():
    with pytest.raises(NotFoundError) as info:
        power_attack(Rational(2), Fraction(3, 2), Fraction(1, 10 ** 9), 10)
    assert info.value.diagnostics["bmax"] == 10
    assert "best_a" in info.value.diagnostics


def test_power_attack_rejects_bad_exponent():
    with pytest.raises(DomainError):
        power_attack(Rational(2), Fraction(5, 2), Fraction(1, 10), 10)


def test_intermediates_are_tagged():
    sources = {c.source for c in power_attack_trace(Rational(2), Fraction(3, 2), 200, intermediates=True)}
    assert INTERMEDIATE in sources


def test_exhaustive_scan_agrees_on_best():
    fast = power_attack(Rational(2), Fraction(3, 2), Fraction(1, 10), 100)
    slow = power_attack(Rational(2), Fraction(3, 2), Fraction(1, 10), 100, exhaustive=True)
    assert (slow.a, slow.b) == (fast.a, fast.b)


@pytest.mark.parametrize(
    "value",
    [Surd(QuadSurd(2, 0, 1)), Surd(QuadSurd(2, 1, 1)), RatPow(2, Fraction(1, 3)), ExpForm.build(1)],
)
def test_convergents_are_within_one_over_r_squared(value):
    enclosure = value.enclose(512)
    convs = convergents(expand(value, 15))
    assert len(convs) == 15
    for conv in convs:
        assert abs(enclosure - conv.value).upper < Fraction(1, conv.r ** 2)


@pytest.mark.parametrize("alpha, c", [(2, Fraction(3, 2)), (3, Fraction(4, 3))])
def test_power_attack_residual_shrinks_like_b_to_c_minus_two(alpha, c):
    candidates = list(power_attack_trace(Rational(alpha), c, 10 ** 5))
    assert len(candidates) > 5
    assert max(candidate.b for candidate in candidates) > 100
    assert all(candidate.scaled_residual(c) < 3 for candidate in candidates)
