from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from primeset.sieve import ExcludedSet


@dataclass(frozen=True)
class DensityDiag:
    """Proportions of admissible search points, used only to size searches."""

    eta: Fraction
    eta_prime: Fraction
    case1_eta: Fraction
    suggested_t: int
    search_budget: int


def density_diag(excluded: ExcludedSet) -> DensityDiag:
    odd = [p for p in excluded if p > 2]
    case1_eta = Fraction(1)
    half_prime = Fraction(1, 2)
    for p in odd:
        case1_eta *= Fraction(p - 2, p)
        half_prime *= Fraction(p - 1, p)
    eta = case1_eta / 2

    # smallest T whose tail sum over E is below a third of case1_eta
    threshold = 2
    for candidate in [2] + odd:
        tail = sum((Fraction(1, p) for p in odd if p > candidate), Fraction(0))
        if tail < case1_eta / 3:
            threshold = candidate
            break
    modulus = 1
    for p in odd:
        if p <= threshold:
            modulus *= p
    return DensityDiag(eta, half_prime, case1_eta, threshold, ceil(modulus / case1_eta))
