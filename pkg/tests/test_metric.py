import itertools
from fractions import Fraction

import pytest

from arith.interval import Interval
from core.errors import DomainError, NotFoundError, PreconditionError
from core.semigroup import GeneratorSet, SemigroupEnumerator
from metric.bad_intervals import bad_intervals, check_scale, complement, harmonic_constant, merge_spans
from metric.finder import choose_scale, find_alpha, measure_bound
from metric.sqrt_sum import sqrt_sum

PREC = 128


@pytest.fixture(scope="module")
def cubes_and_powers():
    return GeneratorSet.build([8, 27], "list")


def test_sqrt_sum_of_empty_set_is_one():
    bound = sqrt_sum(None, 10)
    assert (bound.s_lower, bound.s_upper) == (1, 1)
    assert bound.tail == 0


def test_sqrt_sum_geometric_case():
    bound = sqrt_sum(GeneratorSet.build([4]), 1000)
    assert bound.s_upper == 2
    assert bound.s_lower == Fraction(31, 16)
    assert bound.terms == 5


def test_sqrt_sum_euler_product(cubes_and_powers):
    bound = sqrt_sum(cubes_and_powers, 10 ** 4)
    assert Fraction(19155, 10000) < bound.s_upper < Fraction(19157, 10000)
    assert bound.s_lower < bound.s_upper


def test_sqrt_sum_rejects_bad_cutoff():
    with pytest.raises(DomainError):
        sqrt_sum(None, 0)


def test_harmonic_constant():
    c = harmonic_constant()
    assert Fraction(2791, 1000) < c.lower and c.upper < Fraction(2792, 1000)


def test_merge_and_complement():
    merged = merge_spans([(Fraction(2), Fraction(4)), (Fraction(1), Fraction(3)), (Fraction(6), Fraction(7))])
    assert merged == [(1, 4), (6, 7)]
    assert complement(merged, Fraction(0), Fraction(10)) == [(0, 1), (4, 6), (7, 10)]


@pytest.mark.parametrize("t, delta", [(3, Fraction(1)), (4, Fraction(1)), (1, Fraction(1, 2))])
def test_check_scale_rejects_small_t(t, delta):
    with pytest.raises(PreconditionError):
        check_scale(t, delta)


def test_measure_bound_at_chosen_scale():
    bound = measure_bound(Fraction(1), 8, Fraction(19156, 10000))
    assert Fraction(1) < bound.lower and bound.upper < Fraction(13, 10)


@pytest.mark.parametrize(
    "delta, s_upper, expected",
    [(Fraction(1), Fraction(19156, 10000), 8), (Fraction(1), Fraction(2), 8), (Fraction(1, 2), Fraction(1), 5)],
)
def test_choose_scale(delta, s_upper, expected):
    assert choose_scale(delta, s_upper) == expected


def test_choose_scale_gives_up():
    with pytest.raises(NotFoundError) as info:
        choose_scale(Fraction(1), Fraction(2), max_t=6)
    assert info.value.diagnostics["max_t"] == 6


def test_bad_intervals_without_generators():
    bad = bad_intervals(None, Fraction(1), 8, 10)
    assert bad.intervals == []
    assert bad.survivors == [(8, 16)]
    assert bad.residual == 0


def test_bad_intervals_stay_inside_scale(cubes_and_powers):
    bad = bad_intervals(cubes_and_powers, Fraction(1), 8, 10 ** 5)
    assert bad.intervals
    assert all(8 <= i.lo < i.hi <= 16 for i in bad.intervals)
    assert bad.listed_measure < 1
    assert bad.total_bad < 2


def test_find_alpha_without_generators():
    cert = find_alpha(None, Fraction(1, 2), 1000)
    assert cert.t == 5
    assert cert.beta == Fraction(15, 2)
    assert cert.empirical["violations"] == 0
    assert cert.alpha_enclosure.certified_floor() == 1808


def test_find_alpha_extends_lacunary_system(cubes_and_powers):
    cert = find_alpha(cubes_and_powers, Fraction(1), 10 ** 4, cutoff=10 ** 5)
    assert cert.t == 8
    assert 8 <= cert.beta <= 16
    assert cert.interval[0] <= cert.beta <= cert.interval[1]
    assert cert.empirical["violations"] == 0
    assert cert.empirical["unresolved"] == 0
    assert cert.interval[1] - cert.interval[0] > 2 * cert.residual


def test_find_alpha_requires_lacunary_base():
    with pytest.raises(PreconditionError):
        find_alpha(GeneratorSet.build([Fraction(3, 2)]), Fraction(1), 100)


def test_find_alpha_records_whether_alpha_was_checked():
    assert find_alpha(None, Fraction(1, 2), 1000).empirical["alpha_within_verify"] is False
    assert find_alpha(None, Fraction(1, 2), 10 ** 4).empirical["alpha_within_verify"] is True


def test_find_alpha_measure_bound_for_cubes(cubes_and_powers):
    cert = find_alpha(cubes_and_powers, Fraction(1), 10 ** 4, cutoff=10 ** 5)
    assert Fraction(1125, 1000) < Fraction(cert.empirical["measure_bound"]) < Fraction(1127, 1000)


@pytest.fixture(scope="module")
def cube_exclusions(cubes_and_powers):
    cutoff = 10 ** 5
    elements = {str(e.exponents): e for e in SemigroupEnumerator(cubes_and_powers, cutoff)}
    return bad_intervals(cubes_and_powers, Fraction(1), 8, cutoff), elements


def test_listed_intervals_contain_a_near_collision(cube_exclusions):
    bad, elements = cube_exclusions
    checked = 0
    for interval in bad.intervals:
        m = elements[interval.m].value.enclose(PREC)
        n = elements[interval.n].value.enclose(PREC)
        beta = ((n.log() - m.log()) / interval.k).mid
        if not interval.lo <= beta <= interval.hi:
            continue
        miss = abs(Interval.from_number(interval.k * beta, PREC).exp() * m - n)
        assert miss.upper < bad.delta
        checked += 1
    assert checked > 0


def test_surviving_scales_have_no_near_collision(cube_exclusions):
    bad, elements = cube_exclusions
    values = sorted((e.value.enclose(PREC) for e in elements.values()), key=lambda v: v.lower)
    widest = sorted(bad.survivors, key=lambda s: s[0] - s[1])[:5]
    for lo, hi in widest:
        alpha = Interval.from_number((lo + hi) / 2, PREC).exp()
        for m, n in itertools.combinations(values, 2):
            power = alpha * m
            k = 1
            while power.lower < n.upper + bad.delta:
                assert abs(power - n).lower >= bad.delta
                power = power * alpha
                k += 1


def test_measure_bounds_are_consistent(cube_exclusions):
    bad, elements = cube_exclusions
    c = harmonic_constant().upper
    n_lower = {key: e.value.enclose(PREC).lower for key, e in elements.items()}
    triple_sum = sum((3 * bad.delta / (i.k * n_lower[i.n]) for i in bad.intervals), Fraction(0))
    pair_sum = sum((1 / n_lower[n] for n in {(i.m, i.n): i.n for i in bad.intervals}.values()), Fraction(0))
    assert bad.listed_measure <= triple_sum + Fraction(len(bad.intervals), 2 ** 80)
    assert triple_sum <= 3 * c * bad.delta * pair_sum
    assert 3 * c * bad.delta * pair_sum <= bad.measure_bound
    assert bad.widened_hits == 0
