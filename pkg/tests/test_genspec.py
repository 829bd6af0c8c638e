from fractions import Fraction

import pytest

from arith.quadratic import QuadSurd
from arith.scalar import RatPow, Rational, Surd
from cli.genspec import parse_genspec, parse_scalar, tokenize
from core.errors import DomainError, GenSpecSyntaxError
from core.semigroup import GeneratorSet
from core.setup.system_builder import generator_set_of, surd_literal
from constructions.systems import QuadAlphaSystem


def test_tokenize_positions():
    tokens = tokenize("cpow(3/2, 50)")
    assert [t.text for t in tokens] == ["cpow", "(", "3", "/", "2", ",", "50", ")", ""]
    assert tokens[6].position == 10
    assert tokens[-1].kind == "end"


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("primes(100)", "primes(100)"),
        ("cpow( 1.5 , 50 )", "cpow(3/2,50)"),
        ("primes(100, res=1|7, mod=8)", "primes(100,mod=8,res=1|7)"),
        ("quadalpha(1, 1, 2, 1000)", "quadalpha(1,1,2,1000)"),
        ("list:[5/2, 3+2*sqrt(2), pow(2,3/2)]", "list:[5/2,3+2*sqrt(2),pow(2,3/2)]"),
        ("list:[sqrt(8)]", "list:[2*sqrt(2)]"),
        ("list:[pow(4,1/2)]", "list:[2]"),
    ],
)
def test_canonical_form(text, canonical):
    spec = parse_genspec(text)
    assert spec.canonical() == canonical
    assert parse_genspec(canonical) == spec


def test_build_prime_families():
    assert len(generator_set_of(parse_genspec("primes(100)").build())) == 25
    assert len(generator_set_of(parse_genspec("primes(100,mod=8,res=1|7)").build())) == 11
    assert len(generator_set_of(parse_genspec("cpow(3/2, 50)").build())) == 15


def test_build_construction_family():
    system = parse_genspec("quadalpha(1,1,2,50)").build()
    assert isinstance(system, QuadAlphaSystem)


def test_build_literal_list():
    gens = parse_genspec("list:[3+2*sqrt(2), 5/2]").build()
    assert isinstance(gens, GeneratorSet)
    assert list(gens) == [Rational(Fraction(5, 2)), Surd(QuadSurd(2, 3, 2))]


@pytest.mark.parametrize(
    "text, value",
    [
        ("5/2", Rational(Fraction(5, 2))),
        ("0.25", Rational(Fraction(1, 4))),
        ("1+sqrt(2)", Surd(QuadSurd(2, 1, 1))),
        ("3-2*sqrt(2)", Surd(QuadSurd(2, 3, -2))),
        ("2*sqrt(3)", Surd(QuadSurd(3, 0, 2))),
        ("pow(2,3/2)", RatPow(2, Fraction(3, 2))),
        ("4+sqrt(9)", Rational(7)),
    ],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize(
    "text, position",
    [
        ("primes(100", 10),
        ("foo(1)", 0),
        ("primes(100))", 11),
        ("list:[2,]", 8),
        ("cpow(3/2)", 0),
        ("primes(100, 7)", 0),
        ("cpow(3/2, 50, mod=4)", 14),
        ("primes(10) $", 11),
        ("", 0),
    ],
)
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(GenSpecSyntaxError) as info:
        parse_genspec(text)
    assert info.value.position == position


def test_zero_denominator_is_a_syntax_error():
    with pytest.raises(GenSpecSyntaxError):
        parse_scalar("3/0")


def test_semantic_errors_surface_at_build_time():
    with pytest.raises(DomainError):
        parse_genspec("quadalpha(1,1,4,100)").build()
    with pytest.raises(DomainError):
        parse_genspec("cpow(5/2, 50)").build()
    with pytest.raises(DomainError):
        parse_genspec("list:[1/2]").build()


def test_surd_literal_normalises_radicand():
    assert surd_literal(1, 1, 12) == Surd(QuadSurd(3, 1, 2))
    with pytest.raises(DomainError):
        surd_literal(Fraction(1, 2), 1, 2)
    with pytest.raises(DomainError):
        surd_literal(0, 1, -2)
