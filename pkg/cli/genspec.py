"""Recursive-descent parser for generator specifications.

    spec    := family "(" args ")" | "list" ":" "[" expr ("," expr)* "]"
    family  := "primes" | "cpow" | "quadalpha" | "example1" | "example2"
    args    := number ("," number)* ("," option)*
    option  := "mod" "=" number | "res" "=" number ("|" number)*
    expr    := "pow" "(" number "," number ")" | surd | number [("+" | "-") surd]
    surd    := [number "*"] "sqrt" "(" number ")"
    number  := ["-"] digits ["/" digits | "." digits]
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from arith.scalar import RatPow, Rational, RealScalar, Surd
from core.errors import DomainError, GenSpecSyntaxError
from core.logger import setup_logger
from core.setup.system_builder import System, SystemBuilder, surd_literal

logger = setup_logger(__name__)

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[()\[\],:=|+\-*/]))")

# family -> number of positional arguments
FAMILIES = {"primes": 1, "cpow": 2, "quadalpha": 4, "example1": 1, "example2": 1}
LIST = "list"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None:
            offset = len(text[position:]) - len(text[position:].lstrip())
            raise GenSpecSyntaxError(f"unexpected character {text[position + offset]!r}", position + offset)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _format_number(value: Fraction) -> str:
    return str(value)


def format_scalar(value: RealScalar) -> str:
    if isinstance(value, Rational):
        return _format_number(value.value)
    if isinstance(value, Surd):
        s = value.surd
        surd = f"{abs(s.y)}*sqrt({s.d})" if abs(s.y) != 1 else f"sqrt({s.d})"
        if s.x == 0:
            return surd if s.y > 0 else f"0-{surd}"
        return f"{s.x}{'+' if s.y > 0 else '-'}{surd}"
    if isinstance(value, RatPow):
        return f"pow({value.base},{value.exponent})"
    raise DomainError(f"{value} has no generator-spec literal form")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    args: Tuple[Fraction, ...] = ()
    options: Tuple[Tuple[str, Tuple[int, ...]], ...] = ()
    literals: Tuple[RealScalar, ...] = ()
    source: str = field(default="", compare=False)

    def canonical(self) -> str:
        if self.kind == LIST:
            return "list:[" + ",".join(format_scalar(v) for v in self.literals) + "]"
        parts = [_format_number(a) for a in self.args]
        for name, values in self.options:
            parts.append(f"{name}=" + "|".join(str(v) for v in values))
        return f"{self.kind}(" + ",".join(parts) + ")"

    def _int_arg(self, index: int, name: str) -> int:
        value = self.args[index]
        if value.denominator != 1:
            raise DomainError(f"{self.kind}: {name} must be an integer, got {value}")
        return int(value)

    def build(self, budget: Optional[int] = None) -> System:
        builder = SystemBuilder(budget)
        logger.debug("Building %s", self.canonical())
        if self.kind == LIST:
            return builder.literal(self.literals)
        if self.kind == "primes":
            options = dict(self.options)
            modulus = options.get("mod")
            return builder.primes(
                self._int_arg(0, "limit"),
                modulus[0] if modulus else None,
                options.get("res", ()),
            )
        if self.kind == "cpow":
            return builder.cpow(self.args[0], self._int_arg(1, "limit"))
        if self.kind == "quadalpha":
            a, b, q, limit = (self._int_arg(i, n) for i, n in enumerate(("a", "b", "q", "limit")))
            return builder.quad_alpha(a, b, q, limit)
        if self.kind == "example1":
            return builder.example1(self._int_arg(0, "limit"))
        return builder.example2(self._int_arg(0, "limit"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.text == text and self.current.kind != "end":
            self.index += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        if not self._accept(text):
            found = self.current.text or "end of input"
            raise GenSpecSyntaxError(f"expected {text!r}, found {found!r}", self.current.position)
        return self.tokens[self.index - 1]

    def _name(self) -> Token:
        if self.current.kind != "name":
            raise GenSpecSyntaxError(f"expected a name, found {self.current.text or 'end of input'!r}", self.current.position)
        return self._advance()

    def number(self) -> Fraction:
        negative = self._accept("-")
        token = self.current
        if token.kind != "number":
            raise GenSpecSyntaxError(f"expected a number, found {token.text or 'end of input'!r}", token.position)
        self._advance()
        value = Fraction(token.text)
        if "." not in token.text and self._accept("/"):
            den = self.current
            if den.kind != "number" or "." in den.text:
                raise GenSpecSyntaxError("expected an integer denominator", den.position)
            self._advance()
            if int(den.text) == 0:
                raise GenSpecSyntaxError("zero denominator", den.position)
            value = Fraction(int(token.text), int(den.text))
        return -value if negative else value

    def _radicand(self) -> int:
        self._expect("sqrt")
        self._expect("(")
        position = self.current.position
        value = self.number()
        self._expect(")")
        if value.denominator != 1:
            raise GenSpecSyntaxError("sqrt needs an integer radicand", position)
        return int(value)

    def _surd(self, coefficient: Fraction = Fraction(1)) -> Tuple[Fraction, int]:
        if self.current.text == "sqrt":
            return coefficient, self._radicand()
        y = self.number()
        self._expect("*")
        return coefficient * y, self._radicand()

    def expr(self) -> RealScalar:
        position = self.current.position
        if self._accept("pow"):
            self._expect("(")
            base = self.number()
            self._expect(",")
            exponent = self.number()
            self._expect(")")
            try:
                return SystemBuilder().power(base, exponent)
            except DomainError as exc:
                raise GenSpecSyntaxError(str(exc), position) from exc
        if self.current.text == "sqrt":
            y, d = self._surd()
            return surd_literal(0, y, d)
        x = self.number()
        if self._accept("*"):
            d = self._radicand()
            return surd_literal(0, x, d)
        for sign, text in ((1, "+"), (-1, "-")):
            if self._accept(text):
                y, d = self._surd(Fraction(sign))
                return surd_literal(x, y, d)
        return Rational(x)

    def spec(self) -> GenSpec:
        head = self._name()
        if head.text == LIST:
            self._expect(":")
            self._expect("[")
            literals = [self.expr()]
            while self._accept(","):
                literals.append(self.expr())
            self._expect("]")
            result = GenSpec(LIST, literals=tuple(literals), source=self.text)
        elif head.text in FAMILIES:
            result = self._family(head)
        else:
            raise GenSpecSyntaxError(f"unknown generator family {head.text!r}", head.position)
        if self.current.kind != "end":
            raise GenSpecSyntaxError(f"trailing input {self.current.text!r}", self.current.position)
        return result

    def _family(self, head: Token) -> GenSpec:
        self._expect("(")
        args: List[Fraction] = []
        options: Dict[str, Tuple[int, ...]] = {}
        while True:
            if self.current.kind == "name" and self.tokens[self.index + 1].text == "=":
                option = self._option(head)
                options[option[0]] = option[1]
            else:
                if options:
                    raise GenSpecSyntaxError("positional argument after an option", self.current.position)
                args.append(self.number())
            if not self._accept(","):
                break
        self._expect(")")
        if len(args) != FAMILIES[head.text]:
            raise GenSpecSyntaxError(f"{head.text} takes {FAMILIES[head.text]} arguments, got {len(args)}", head.position)
        if "res" in options and "mod" not in options:
            raise GenSpecSyntaxError("res= needs mod=", head.position)
        return GenSpec(head.text, tuple(args), tuple(sorted(options.items())), source=self.text)

    def _option(self, head: Token) -> Tuple[str, Tuple[int, ...]]:
        name = self._name()
        if head.text != "primes" or name.text not in ("mod", "res"):
            raise GenSpecSyntaxError(f"unknown option {name.text!r} for {head.text}", name.position)
        self._expect("=")
        values = [self._integer()]
        while name.text == "res" and self._accept("|"):
            values.append(self._integer())
        return name.text, tuple(values)

    def _integer(self) -> int:
        position = self.current.position
        value = self.number()
        if value.denominator != 1:
            raise GenSpecSyntaxError("expected an integer", position)
        return int(value)


def parse_genspec(text: str) -> GenSpec:
    if not text or not text.strip():
        raise GenSpecSyntaxError("empty generator spec", 0)
    return _Parser(text).spec()


def parse_scalar(text: str) -> RealScalar:
    """A single literal such as ``5/2``, ``1+sqrt(2)`` or ``pow(2,3/2)``."""
    if not text or not text.strip():
        raise GenSpecSyntaxError("empty literal", 0)
    parser = _Parser(text)
    value = parser.expr()
    if parser.current.kind != "end":
        raise GenSpecSyntaxError(f"trailing input {parser.current.text!r}", parser.current.position)
    return value
