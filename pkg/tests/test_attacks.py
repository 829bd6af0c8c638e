from fractions import Fraction

import pytest

from arith.quadratic import QuadSurd
from arith.scalar import Rational, Surd
from attacks.density import density_diag
from attacks.irrational import ConvergentPair, IrrationalAttack, attack_irrational
from attacks.rational import RationalAttack, attack_rational
from approx.continued_fraction import Convergent
from core.errors import DomainError, NotFoundError, PreconditionError
from models.witness import IRRATIONAL_CASE, RATIONAL_CASE
from primeset.sieve import ExcludedSet


@pytest.mark.parametrize(
    "primes, eta, eta_prime, case1, threshold, budget",
    [
        ([], Fraction(1, 2), Fraction(1, 2), Fraction(1), 2, 1),
        ([3], Fraction(1, 6), Fraction(1, 3), Fraction(1, 3), 3, 9),
        ([3, 5], Fraction(1, 10), Fraction(4, 15), Fraction(1, 5), 5, 75),
    ],
)
def test_density_diag(primes, eta, eta_prime, case1, threshold, budget):
    diag = density_diag(ExcludedSet.of(primes))
    assert (diag.eta, diag.eta_prime, diag.case1_eta) == (eta, eta_prime, case1)
    assert diag.suggested_t == threshold
    assert diag.search_budget == budget


def test_rational_attack_witness(excluded_three, tenth):
    witness = attack_rational(excluded_three, 5, 2, tenth)
    assert witness.case == RATIONAL_CASE
    assert (witness.n_prime, witness.m_prime) == (61, 5957)
    assert witness.exact_gap == Fraction(1, 32)
    assert witness.provenance["m"] == 5
    assert witness.provenance["z"] == 0
    assert 5 ** 5 * witness.n_prime - 2 ** 5 * witness.m_prime == 1
    assert witness.gap.upper < tenth


def test_rational_attack_gap_shrinks_with_delta(excluded_three):
    gaps = [attack_rational(excluded_three, 5, 2, Fraction(1, 10 ** j)).exact_gap for j in (1, 2, 3)]
    assert gaps == [Fraction(1, 32), Fraction(1, 256), Fraction(1, 2048)]


def test_rational_attack_odd_product_uses_difference_two():
    witness = attack_rational(ExcludedSet.of([5]), 3, 2, Fraction(3, 10))
    assert witness.provenance["d"] == 1
    attack = RationalAttack(ExcludedSet(), 5, 3, Fraction(1, 2))
    assert attack.d == 2
    witness = attack.search()
    assert witness.n_prime % 2 == 1 and witness.m_prime % 2 == 1
    assert witness.exact_gap == Fraction(2, 3 ** attack.m)


def test_rational_attack_with_empty_excluded_set():
    witness = attack_rational(ExcludedSet(), 3, 2, Fraction(3, 10))
    assert (witness.n_prime, witness.m_prime) == (11, 37)
    assert witness.exact_gap == Fraction(1, 8)


def test_rational_attack_workers_agree(excluded_three, tenth):
    single = attack_rational(excluded_three, 5, 2, tenth)
    pooled = attack_rational(excluded_three, 5, 2, tenth, workers=4)
    assert (pooled.n_prime, pooled.m_prime) == (single.n_prime, single.m_prime)


def test_rational_attack_not_found():
    with pytest.raises(NotFoundError) as info:
        attack_rational(ExcludedSet.of([3, 61]), 5, 2, Fraction(1, 10), z_max=0)
    assert info.value.diagnostics["z_max"] == 0


@pytest.mark.parametrize(
    "a, b, error",
    [(4, 2, PreconditionError), (6, 4, DomainError), (2, 3, DomainError)],
)
def test_rational_attack_validation(a, b, error):
    with pytest.raises(error):
        RationalAttack(ExcludedSet(), a, b, Fraction(1, 10))


def test_rational_attack_rejects_non_positive_delta():
    with pytest.raises(DomainError):
        RationalAttack(ExcludedSet(), 5, 2, 0)


def test_convergent_pair_parity():
    pair = ConvergentPair(1, Convergent(12, 5, 2), Convergent(5, 2, 1))
    assert abs(pair.determinant) == 1
    assert pair.mediant(1, 1) == (7, 17)
    px, py = pair.parity()
    n_prime, m_prime = pair.mediant(px or 2, py or 2)
    assert n_prime % 2 == 1 and m_prime % 2 == 1


@pytest.mark.parametrize(
    "delta, k, n_prime, m_prime",
    [(Fraction(1, 2), 1, 7, 17), (Fraction(1, 10), 2, 17, 41), (Fraction(1, 100), 5, 239, 577)],
)
def test_irrational_attack_on_silver_ratio(excluded_three, silver_ratio, delta, k, n_prime, m_prime):
    witness = attack_irrational(excluded_three, silver_ratio, delta)
    assert witness.case == IRRATIONAL_CASE
    assert witness.provenance["k"] == k
    assert (witness.n_prime, witness.m_prime) == (n_prime, m_prime)
    assert witness.gap.upper < delta
    assert excluded_three.is_free(witness.n_prime) and excluded_three.is_free(witness.m_prime)


def test_irrational_attack_workers_agree(excluded_three, silver_ratio):
    witness = attack_irrational(excluded_three, silver_ratio, Fraction(1, 100), workers=3)
    assert (witness.n_prime, witness.m_prime) == (239, 577)


def test_irrational_attack_not_found(excluded_three, silver_ratio):
    with pytest.raises(NotFoundError) as info:
        attack_irrational(excluded_three, silver_ratio, Fraction(1, 10 ** 9), max_k=3)
    assert info.value.diagnostics["max_k"] == 3


def test_irrational_attack_rejects_rational_alpha(excluded_three):
    with pytest.raises(PreconditionError):
        IrrationalAttack(excluded_three, Rational(Fraction(5, 2)), Fraction(1, 10))


def test_irrational_attack_rejects_alpha_below_one(excluded_three):
    with pytest.raises(DomainError):
        IrrationalAttack(excluded_three, Surd(QuadSurd(2, -1, 1)), Fraction(1, 10))
