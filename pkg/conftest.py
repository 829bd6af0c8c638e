import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from arith.quadratic import QuadSurd  # noqa: E402
from arith.scalar import Surd  # noqa: E402
from primeset.sieve import ExcludedSet  # noqa: E402


@pytest.fixture
def silver_ratio():
    return Surd(QuadSurd(2, 1, 1))


@pytest.fixture
def excluded_three():
    return ExcludedSet.of([3])


@pytest.fixture
def tenth():
    return Fraction(1, 10)


@pytest.fixture(autouse=True)
def _default_precision(monkeypatch):
    monkeypatch.delenv("BEURLING_MAX_PRECISION_BITS", raising=False)
