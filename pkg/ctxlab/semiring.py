"""
Exact semiring scalars and finite-support distributions
Rational weights are fractions.Fraction; Boolean weights are the ints 0/1
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Tuple, Union

from .errors import InconsistentDistribution, WrongSemiring

logger = logging.getLogger(__name__)

Value = Union[Fraction, int]
Outcome = Hashable


class Kind(Enum):
    RATIONAL = "rational"
    BOOLEAN = "boolean"

    @property
    def zero(self) -> Value:
        return Fraction(0) if self is Kind.RATIONAL else 0

    @property
    def one(self) -> Value:
        return Fraction(1) if self is Kind.RATIONAL else 1

    def add(self, a: Value, b: Value) -> Value:
        if self is Kind.BOOLEAN:
            return 1 if (a or b) else 0
        return a + b

    def mul(self, a: Value, b: Value) -> Value:
        if self is Kind.BOOLEAN:
            return 1 if (a and b) else 0
        return a * b

    def div(self, a: Value, b: Value) -> Value:
        """Divide by a nonzero scalar; in 𝔹 the only nonzero scalar is 1"""
        if self is Kind.BOOLEAN:
            return a
        return a / b

    def total(self, values: Iterable[Value]) -> Value:
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def coerce(self, raw: Any) -> Value:
        """Convert a raw number or 'num/den' string into this kind's scalar"""
        if self is Kind.BOOLEAN:
            if raw in (0, 1, "0", "1", True, False):
                return int(raw in (1, "1", True))
            raise WrongSemiring(f"Boolean entry must be 0 or 1, got {raw!r}")
        value = Fraction(raw)
        if value < 0:
            raise WrongSemiring(f"Rational entry must be non-negative, got {raw!r}")
        return value


@dataclass(frozen=True)
class Scalar:
    """A semiring element tagged by kind"""

    value: Value
    kind: Kind = Kind.RATIONAL

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.kind.coerce(self.value))

    def _check(self, other: "Scalar") -> None:
        if other.kind is not self.kind:
            raise WrongSemiring(f"Cannot combine {self.kind.value} with {other.kind.value}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.kind.add(self.value, other.value), self.kind)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.kind.mul(self.value, other.value), self.kind)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return format_value(self.value)


def format_value(value: Value) -> str:
    """'num/den' for proper fractions, plain integers otherwise"""
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))


def _sort_key(outcome: Outcome) -> Tuple[int, Any]:
    if isinstance(outcome, tuple):
        return (1, outcome)
    return (0, outcome)


@dataclass(frozen=True)
class Dist:
    """
    Finite-support normalized distribution.

    Only nonzero weights are stored, sorted by outcome, so structural
    equality is distribution equality.
    """

    entries: Tuple[Tuple[Outcome, Value], ...]
    kind: Kind = Kind.RATIONAL
    _index: Dict[Outcome, Value] = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_weights(cls, weights: Dict[Outcome, Any], kind: Kind = Kind.RATIONAL, check: bool = True) -> "Dist":
        merged: Dict[Outcome, Value] = {}
        for outcome, raw in weights.items():
            scalar = Scalar(raw, kind)
            if not scalar.is_zero():
                merged[outcome] = scalar.value
        entries = tuple(sorted(merged.items(), key=lambda kv: _sort_key(kv[0])))
        dist = cls(entries, kind)
        if check and kind.total(v for _, v in entries) != kind.one:
            raise InconsistentDistribution(f"Weights do not normalize: {dist}")
        return dist

    def __post_init__(self) -> None:
        self._index.update(self.entries)

    def __getitem__(self, outcome: Outcome) -> Value:
        return self._index.get(outcome, self.kind.zero)

    def __iter__(self) -> Iterator[Outcome]:
        return iter(self._index)

    def items(self) -> List[Tuple[Outcome, Value]]:
        return list(self.entries)

    def support(self) -> FrozenSet[Outcome]:
        return frozenset(self._index)

    def is_delta(self) -> bool:
        return len(self.entries) == 1

    def pushforward(self, f: Callable[[Outcome], Outcome]) -> "Dist":
        return pushforward(self, f)

    def __str__(self) -> str:
        body = ", ".join(f"{o!r}: {format_value(v)}" for o, v in self.entries)
        return "{" + body + "}"


def delta(outcome: Outcome, kind: Kind = Kind.RATIONAL) -> Dist:
    return Dist(((outcome, kind.one),), kind)


def uniform(outcomes: Iterable[Outcome], kind: Kind = Kind.RATIONAL) -> Dist:
    items = list(outcomes)
    if kind is Kind.BOOLEAN:
        return Dist.from_weights({o: 1 for o in items}, kind)
    w = Fraction(1, len(items))
    return Dist.from_weights({o: w for o in items}, kind)


def pushforward(p: Dist, f: Callable[[Outcome], Outcome]) -> Dist:
    acc: Dict[Outcome, Value] = {}
    for outcome, w in p.entries:
        target = f(outcome)
        acc[target] = p.kind.add(acc.get(target, p.kind.zero), w)
    return Dist.from_weights(acc, p.kind, check=False)


def group_add(x: Outcome, y: Outcome, d: int) -> Outcome:
    """Componentwise addition in ℤ_d or ℤ_d^n"""
    if isinstance(x, tuple):
        return tuple((a + b) % d for a, b in zip(x, y))
    return (x + y) % d


def convolve(p: Dist, q: Dist, d: int) -> Dist:
    if p.kind is not q.kind:
        raise WrongSemiring("Convolution needs distributions of the same kind")
    acc: Dict[Outcome, Value] = {}
    for g1, w1 in p.entries:
        for g2, w2 in q.entries:
            g = group_add(g1, g2, d)
            acc[g] = p.kind.add(acc.get(g, p.kind.zero), p.kind.mul(w1, w2))
    return Dist.from_weights(acc, p.kind, check=False)


def boolean_projection(p: Dist) -> Dist:
    if p.kind is not Kind.RATIONAL:
        raise WrongSemiring("Boolean projection expects a rational distribution")
    return Dist(tuple((o, 1) for o, _ in p.entries), Kind.BOOLEAN)


def product(p: Dist, q: Dist) -> Dist:
    """Independent coupling on pairs"""
    return Dist.from_weights(
        {(a, b): p.kind.mul(wa, wb) for a, wa in p.entries for b, wb in q.entries},
        p.kind,
        check=False,
    )


def mix(components: Iterable[Tuple[Fraction, Dist]]) -> Dist:
    """Monad multiplication: the convex combination Σ w·p"""
    acc: Dict[Outcome, Fraction] = {}
    total = Fraction(0)
    for weight, p in components:
        if p.kind is not Kind.RATIONAL:
            raise WrongSemiring("Mixtures are defined for rational distributions")
        total += weight
        for outcome, w in p.entries:
            acc[outcome] = acc.get(outcome, Fraction(0)) + weight * w
    if total != 1:
        raise InconsistentDistribution(f"Mixture weights sum to {total}, expected 1")
    return Dist.from_weights(acc, Kind.RATIONAL)
