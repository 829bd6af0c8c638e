"""Sorted enumeration of the multiplicative semigroup generated by reals > 1."""

import heapq
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from arith.compare import OrderKind, compare, exact_compare
from arith.scalar import ONE, RealScalar, as_scalar, multiply, power
from core.errors import DomainError
from core.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class GeneratorSet:
    """Generators ascending by certified comparison.

    ``certified_order`` is False when some adjacent pair could not be ordered
    within the precision budget; enumeration then stops relying on the order.
    """

    generators: Tuple[RealScalar, ...]
    label: str = "list"
    certified_order: bool = True

    @classmethod
    def build(cls, generators: Iterable, label: str = "list", budget: Optional[int] = None) -> "GeneratorSet":
        unique: List[RealScalar] = []
        seen: Set[RealScalar] = set()
        for raw in generators:
            g = as_scalar(raw)
            if g in seen:
                continue
            order = compare(g, ONE, budget)
            if not order.is_greater:
                logger.error("Generator %s is not certified > 1 (%s)", g, order.kind.value)
                raise DomainError(f"generator {g} must be > 1")
            seen.add(g)
            unique.append(g)

        unresolved = []

        def _cmp(a: RealScalar, b: RealScalar) -> int:
            order = compare(a, b, budget)
            if order.is_less:
                return -1
            if order.is_greater:
                return 1
            if order.is_unresolved:
                unresolved.append((a, b))
            ka, kb = a.sort_key(), b.sort_key()
            return (ka > kb) - (ka < kb)

        ordered = tuple(sorted(unique, key=cmp_to_key(_cmp)))
        if unresolved:
            logger.warning("%d generator comparisons unresolved in %s", len(unresolved), label)
        return cls(ordered, label, not unresolved)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[RealScalar]:
        return iter(self.generators)

    def __getitem__(self, index: int) -> RealScalar:
        return self.generators[index]

    def with_generator(self, extra: RealScalar, label: Optional[str] = None, budget: Optional[int] = None) -> "GeneratorSet":
        return GeneratorSet.build(self.generators + (extra,), label or self.label, budget)

    def count_leq(self, x: RealScalar, budget: Optional[int] = None) -> int:
        return sum(1 for g in self.generators if not compare(g, x, budget).is_greater)


@dataclass(frozen=True)
class ExponentVec:
    """Sparse generator-index -> exponent map; the empty vector is b0 = 1."""

    entries: Tuple[Tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, mapping: Dict[int, int]) -> "ExponentVec":
        return cls(tuple(sorted((i, e) for i, e in mapping.items() if e)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.entries)

    @property
    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else -1

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.entries)

    def bump(self, index: int) -> "ExponentVec":
        mapping = self.as_dict()
        mapping[index] = mapping.get(index, 0) + 1
        return ExponentVec.from_dict(mapping)

    def common(self, other: "ExponentVec") -> "ExponentVec":
        mine, theirs = self.as_dict(), other.as_dict()
        return ExponentVec.from_dict({i: min(e, theirs.get(i, 0)) for i, e in mine.items()})

    def minus(self, other: "ExponentVec") -> "ExponentVec":
        mapping = self.as_dict()
        for i, e in other.entries:
            left = mapping.get(i, 0) - e
            if left < 0:
                raise DomainError(f"exponent vector {other} does not divide {self}")
            mapping[i] = left
        return ExponentVec.from_dict(mapping)

    def value(self, generators: Sequence[RealScalar]) -> RealScalar:
        result: RealScalar = ONE
        for i, e in self.entries:
            result = multiply(result, power(generators[i], e))
        return result

    def __str__(self) -> str:
        return "{" + ",".join(f"{i}:{e}" for i, e in self.entries) + "}"


@dataclass(frozen=True)
class Element:
    exponents: ExponentVec
    value: RealScalar

    def __str__(self) -> str:
        return f"{self.value} {self.exponents}"


@dataclass(frozen=True)
class UnresolvedComparison:
    """An ordering decision that hit the precision cap; ``right`` None means the bound X."""

    left: Element
    right: Optional[Element]
    precision: Optional[int]
    context: str


def reduce_pair(first: Element, second: Element, generators: Sequence[RealScalar]) -> Tuple[Element, Element, ExponentVec]:
    """Strip the common factor of two elements; returns the reduced pair and the factor."""
    shared = first.exponents.common(second.exponents)
    if not shared.entries:
        return first, second, shared
    a = first.exponents.minus(shared)
    b = second.exponents.minus(shared)
    return Element(a, a.value(generators)), Element(b, b.value(generators)), shared


class _Candidate:
    __slots__ = ("element", "owner")

    def __init__(self, element: Element, owner: "SemigroupEnumerator"):
        self.element = element
        self.owner = owner

    def __lt__(self, other: "_Candidate") -> bool:
        return self.owner._less(self.element, other.element)


class SemigroupEnumerator:
    """Best-first enumeration of every product of generators <= limit.

    Children of an element multiply by generators whose index is at least the
    element's largest used index, so each exponent vector appears exactly once.
    Single-owner iterator: do not advance it from several threads.
    """

    def __init__(self, generators: GeneratorSet, limit, budget: Optional[int] = None):
        if not len(generators):
            raise DomainError("generator set is empty")
        self.generators = generators
        self.limit = as_scalar(limit)
        self.budget = budget
        if compare(self.limit, ONE, budget).is_less:
            raise DomainError(f"enumeration bound {self.limit} is below 1")
        self.unresolved: List[UnresolvedComparison] = []
        self.collisions: List[Tuple[Element, Element]] = []
        self.emitted = 0
        self._unresolved_keys: Set[Tuple[ExponentVec, Optional[ExponentVec]]] = set()
        self._previous: Optional[Element] = None
        self._heap: List[_Candidate] = [_Candidate(Element(ExponentVec(), ONE), self)]

    def _record_unresolved(self, left: Element, right: Optional[Element], precision, context: str) -> None:
        key = (left.exponents, right.exponents if right is not None else None)
        if key in self._unresolved_keys:
            return
        self._unresolved_keys.add(key)
        logger.warning("Unresolved %s comparison for %s at %s bits", context, left.exponents, precision)
        self.unresolved.append(UnresolvedComparison(left, right, precision, context))

    def _less(self, a: Element, b: Element) -> bool:
        order = compare(a.value, b.value, self.budget)
        if order.kind is OrderKind.LESS:
            return True
        if order.kind is OrderKind.GREATER:
            return False
        if order.is_unresolved:
            first, second = sorted((a, b), key=lambda e: e.exponents.entries)
            self._record_unresolved(first, second, order.precision, "order")
        return a.exponents.entries < b.exponents.entries

    def _push_children(self, element: Element) -> None:
        start = max(element.exponents.max_index, 0)
        for index in range(start, len(self.generators)):
            value = multiply(element.value, self.generators[index])
            child = Element(element.exponents.bump(index), value)
            order = compare(value, self.limit, self.budget)
            if order.is_greater:
                if self.generators.certified_order:
                    break
                continue
            if order.is_unresolved:
                self._record_unresolved(child, None, order.precision, "limit")
            heapq.heappush(self._heap, _Candidate(child, self))

    def __iter__(self) -> "SemigroupEnumerator":
        return self

    def __next__(self) -> Element:
        if not self._heap:
            logger.debug("Enumeration of %s finished with %d elements", self.generators.label, self.emitted)
            raise StopIteration
        element = heapq.heappop(self._heap).element
        self._push_children(element)
        previous = self._previous
        if previous is not None:
            exact = exact_compare(previous.value, element.value)
            if exact is not None and exact.is_equal:
                logger.warning("Collision between %s and %s", previous.exponents, element.exponents)
                self.collisions.append((previous, element))
        self._previous = element
        self.emitted += 1
        return element


def enumerate_semigroup(generators: GeneratorSet, limit, budget: Optional[int] = None) -> SemigroupEnumerator:
    return SemigroupEnumerator(generators, limit, budget)


def counting(generators: GeneratorSet, x, budget: Optional[int] = None) -> Tuple[int, int]:
    """(B(x), G(x)): elements <= x including b0 = 1, and generators <= x."""
    x = as_scalar(x)
    b_count = sum(1 for _ in SemigroupEnumerator(generators, x, budget))
    return b_count, generators.count_leq(x, budget)
