"""
Logical categories of Boolean simplicial distributions
Boolean matrices are d²-bit integers; hom-sets are bitsets over those codes
"""
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Deque, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import DeciderDisagreement, WrongOutcomeArity
from .scenario import Circle, collapse_edge
from .semiring import Dist, Kind
from .simpdist import (
    OutcomeLabeling,
    SimpDist,
    act,
    boolean_projection,
    restrict,
    transport_collapse,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _multiply(left: int, right: int, d: int) -> int:
    out = 0
    for a in range(d):
        for c in range(d):
            if not (left >> (a * d + c)) & 1:
                continue
            for b in range(d):
                if (right >> (c * d + b)) & 1:
                    out |= 1 << (a * d + b)
    return out


@lru_cache(maxsize=None)
def _transpose(code: int, d: int) -> int:
    out = 0
    for a in range(d):
        for b in range(d):
            if (code >> (a * d + b)) & 1:
                out |= 1 << (b * d + a)
    return out


@dataclass(frozen=True, order=True)
class BoolMatrix:
    """Nonzero d×d matrix over 𝔹; bit a·d+b holds entry (a, b)"""

    d: int
    bits: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BoolMatrix":
        d = len(rows)
        bits = 0
        for a, row in enumerate(rows):
            if len(row) != d:
                raise WrongOutcomeArity("Boolean matrix must be square")
            for b, v in enumerate(row):
                if v:
                    bits |= 1 << (a * d + b)
        return cls(d, bits)

    @classmethod
    def from_dist(cls, m: Dist, d: int) -> "BoolMatrix":
        bits = 0
        for (a, b) in m.support():
            bits |= 1 << (a * d + b)
        return cls(d, bits)

    @classmethod
    def identity(cls, d: int) -> "BoolMatrix":
        return cls(d, sum(1 << (a * d + a) for a in range(d)))

    @classmethod
    def ones(cls, d: int) -> "BoolMatrix":
        return cls(d, (1 << (d * d)) - 1)

    @classmethod
    def shift(cls, d: int, g: int) -> "BoolMatrix":
        """Permutation pattern a -> a + g"""
        return cls(d, sum(1 << (a * d + (a + g) % d) for a in range(d)))

    def __getitem__(self, ab: Tuple[int, int]) -> int:
        a, b = ab
        return (self.bits >> (a * self.d + b)) & 1

    def rows(self) -> List[List[int]]:
        return [[self[(a, b)] for b in range(self.d)] for a in range(self.d)]

    def __matmul__(self, other: "BoolMatrix") -> "BoolMatrix":
        return BoolMatrix(self.d, _multiply(self.bits, other.bits, self.d))

    @property
    def T(self) -> "BoolMatrix":
        return BoolMatrix(self.d, _transpose(self.bits, self.d))

    def is_zero(self) -> bool:
        return self.bits == 0

    def row_support(self) -> Set[int]:
        return {a for a in range(self.d) if any(self[(a, b)] for b in range(self.d))}

    def column_support(self) -> Set[int]:
        return {b for b in range(self.d) if any(self[(a, b)] for a in range(self.d))}

    def name(self) -> str:
        if self.d == 2:
            for label, m in NAMED.items():
                if m == self:
                    return label
        return "/".join("".join(str(v) for v in row) for row in self.rows())


NAMED: Dict[str, BoolMatrix] = {
    "I": BoolMatrix.from_rows([[1, 0], [0, 1]]),
    "antidiag": BoolMatrix.from_rows([[0, 1], [1, 0]]),
    "A": BoolMatrix.from_rows([[1, 1], [1, 0]]),
    "B": BoolMatrix.from_rows([[1, 1], [0, 1]]),
    "B^T": BoolMatrix.from_rows([[1, 0], [1, 1]]),
    "D": BoolMatrix.from_rows([[0, 1], [1, 1]]),
    "U": BoolMatrix.from_rows([[1, 1], [1, 1]]),
}
A, B, BT, D, U = NAMED["A"], NAMED["B"], NAMED["B^T"], NAMED["D"], NAMED["U"]
I2, ANTIDIAG = NAMED["I"], NAMED["antidiag"]


def _codes(bitset: int) -> Iterator[int]:
    while bitset:
        low = bitset & -bitset
        yield low.bit_length() - 1
        bitset ^= low


@dataclass(frozen=True)
class LogicalCategory:
    objects: Tuple[str, ...]
    d: int
    hom: Mapping[Tuple[str, str], int] = field(default_factory=dict)

    def hom_set(self, x: str, y: str) -> FrozenSet[BoolMatrix]:
        return frozenset(BoolMatrix(self.d, code) for code in _codes(self.hom.get((x, y), 0)))

    def contains(self, x: str, y: str, m: BoolMatrix) -> bool:
        return bool((self.hom.get((x, y), 0) >> m.bits) & 1)

    def pairs(self) -> List[Tuple[str, str]]:
        return sorted(k for k, v in self.hom.items() if v)

    def as_dict(self) -> Dict[str, List[str]]:
        return {f"{x},{y}": sorted(m.name() for m in self.hom_set(x, y)) for x, y in self.pairs()}

    def is_closed(self) -> bool:
        for (x, y) in self.pairs():
            for (y2, z) in self.pairs():
                if y2 != y:
                    continue
                for m in self.hom_set(x, y):
                    for n in self.hom_set(y, z):
                        if not self.contains(x, z, m @ n):
                            return False
        return True

    def is_symmetric(self) -> bool:
        return all(self.contains(y, x, m.T) for (x, y) in self.pairs() for m in self.hom_set(x, y))


def _as_boolean(p: SimpDist) -> SimpDist:
    if p.kind is Kind.RATIONAL:
        logger.debug("Projecting rational distribution to 𝔹 before building the category")
        return boolean_projection(p)
    return p


def build_category(p: SimpDist) -> LogicalCategory:
    """Least fixed point of edge matrices, transposes and identities under product"""
    p = _as_boolean(p)
    d = p.d
    hom: Dict[Tuple[str, str], int] = defaultdict(int)
    outgoing: Dict[str, Set[str]] = defaultdict(set)
    incoming: Dict[str, Set[str]] = defaultdict(set)
    work: Deque[Tuple[str, str, int]] = deque()

    def add(x: str, y: str, code: int) -> None:
        if code == 0 or (hom[(x, y)] >> code) & 1:
            return
        hom[(x, y)] |= 1 << code
        outgoing[x].add(y)
        incoming[y].add(x)
        work.append((x, y, code))

    # identity at v is the diagonal of its vertex distribution
    for v in p.scenario.vertices:
        add(v, v, sum(1 << (a * d + a) for a in p.vertex_distribution(v).support()))
    for edge in p.scenario.edges:
        code = BoolMatrix.from_dist(p.matrix(edge.id), d).bits
        add(edge.source, edge.target, code)
        add(edge.target, edge.source, _transpose(code, d))

    steps = 0
    while work:
        x, y, m = work.popleft()
        steps += 1
        for z in list(outgoing[y]):
            for n in list(_codes(hom[(y, z)])):
                add(x, z, _multiply(m, n, d))
        for w in list(incoming[x]):
            for l in list(_codes(hom[(w, x)])):
                add(w, y, _multiply(l, m, d))
    logger.debug(f"Category closure: {steps} worklist steps, {len(hom)} hom-sets")
    return LogicalCategory(tuple(p.scenario.vertices), d, dict(hom))


def shift_category(c: LogicalCategory, labels: Mapping[str, int]) -> LogicalCategory:
    """φ·𝒞: entry (a, b) of a morphism x -> y moves to (a + φ(x), b + φ(y))"""
    d = c.d
    hom = {}
    for (x, y) in c.pairs():
        bitset = 0
        for m in c.hom_set(x, y):
            shifted = 0
            for a in range(d):
                for b in range(d):
                    if m[(a, b)]:
                        shifted |= 1 << (((a + labels[x]) % d) * d + (b + labels[y]) % d)
            bitset |= 1 << shifted
        hom[(x, y)] = bitset
    return LogicalCategory(c.objects, d, hom)


def category_support(c: LogicalCategory) -> List[OutcomeLabeling]:
    """Functors F with M[F(x), F(y)] = 1 for every morphism M: x -> y"""
    d = c.d
    allowed: Dict[Tuple[str, str], int] = {}
    for (x, y) in c.pairs():
        meet = (1 << (d * d)) - 1
        for code in _codes(c.hom[(x, y)]):
            meet &= code
        allowed[(x, y)] = meet
    order = list(c.objects)
    found: List[OutcomeLabeling] = []
    labels: Dict[str, int] = {}

    def fits(v: str, a: int) -> bool:
        if (v, v) in allowed and not (allowed[(v, v)] >> (a * d + a)) & 1:
            return False
        for u, b in labels.items():
            if (u, v) in allowed and not (allowed[(u, v)] >> (b * d + a)) & 1:
                return False
            if (v, u) in allowed and not (allowed[(v, u)] >> (a * d + b)) & 1:
                return False
        return True

    def extend(i: int) -> None:
        if i == len(order):
            found.append(OutcomeLabeling.of(labels))
            return
        v = order[i]
        for a in range(d):
            if fits(v, a):
                labels[v] = a
                extend(i + 1)
                del labels[v]

    extend(0)
    return sorted(found)


@dataclass(frozen=True)
class SCDecision:
    strongly_contextual: bool
    witness_vertex: Optional[str] = None
    reason: str = ""
    trace: Tuple[str, ...] = ()

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "strongly_contextual": self.strongly_contextual,
            "witness_vertex": self.witness_vertex,
            "reason": self.reason,
        }
        if self.trace:
            out["trace"] = list(self.trace)
        return out


def sc_criterion(c: LogicalCategory) -> SCDecision:
    """Strongly contextual iff some 𝒞(x,x) holds {A, D} or the antidiagonal (d = 2)"""
    if c.d != 2:
        raise WrongOutcomeArity(f"The endomorphism criterion is proved for d=2 only, got d={c.d}")
    for x in sorted(c.objects):
        if c.contains(x, x, ANTIDIAG):
            return SCDecision(True, x, "antidiagonal endomorphism")
        if c.contains(x, x, A) and c.contains(x, x, D):
            return SCDecision(True, x, "{A, D} endomorphisms")
    return SCDecision(False, None, "no vertex has {A, D} or the antidiagonal as endomorphisms")


def semigroup_table_check() -> List[Dict[str, Any]]:
    """Verify the multiplication rules of {A, B, Bᵀ, D, U} by direct product"""
    named = {"A": A, "B": B, "B^T": BT, "D": D, "U": U}
    checks: List[Tuple[str, BoolMatrix, BoolMatrix]] = []
    for label, m in named.items():
        checks.append((f"U{label}=U", U @ m, U))
        checks.append((f"{label}U=U", m @ U, U))
    checks += [("U^T=U", U.T, U), ("A^T=A", A.T, A), ("D^T=D", D.T, D)]
    checks += [("AA=U", A @ A, U), ("DD=U", D @ D, U), ("BB=B", B @ B, B)]
    for label in ("A", "B", "D", "U"):
        m = named[label]
        checks.append((f"{label}{label}^T=U", m @ m.T, U))
        checks.append((f"{label}^T{label}=U", m.T @ m, U))
    checks += [("AD=B", A @ D, B), ("DA=B^T", D @ A, BT)]
    checks += [
        ("AB=U", A @ B, U),
        ("B^TA=U", BT @ A, U),
        ("BA=A", B @ A, A),
        ("AB^T=A", A @ BT, A),
        ("BD=U", B @ D, U),
        ("DB^T=U", D @ BT, U),
        ("DB=D", D @ B, D),
        ("B^TD=D", BT @ D, D),
    ]
    return [
        {"identity": label, "product": got.name(), "expected": want.name(), "holds": got == want}
        for label, got, want in checks
    ]


def boundary_extendable(m: BoolMatrix) -> bool:
    """Every (row, column) pair of the boundary supports is realized"""
    return all(m[(a, b)] for a in m.row_support() for b in m.column_support())


def circle_product(p: SimpDist, circle: Circle) -> BoolMatrix:
    """Single-edge matrix M₁⋯M_n of a circle, reversed steps transposed"""
    p = _as_boolean(p)
    p.scenario.walk_endpoints(circle)
    acc = BoolMatrix.identity(p.d)
    for step in circle.steps:
        m = BoolMatrix.from_dist(p.matrix(step.edge), p.d)
        acc = acc @ (m if step.forward else m.T)
    return acc


def _edge_pattern(q: SimpDist, edge_id: str) -> BoolMatrix:
    return BoolMatrix.from_dist(q.matrix(edge_id), q.d)


def reduce_and_decide(p: SimpDist, cross_check: bool = True) -> SCDecision:
    """
    Explain a d = 2 Boolean verdict by reduction.

    Boundary-extendable edges are dropped, identity edges collapsed,
    antidiagonal edges turned into identities by the group action, and the
    reduced category is tested for {A, D} endomorphisms.
    """
    q = _as_boolean(p)
    if q.d != 2:
        raise WrongOutcomeArity(f"Reduction is defined for d=2, got d={q.d}")
    trace: List[str] = []

    dropped = [e.id for e in q.scenario.edges if boundary_extendable(_edge_pattern(q, e.id))]
    if dropped:
        s = q.scenario
        for e in dropped:
            s = s.without_edge(e)
        q = restrict(q, s)
        trace.append(f"drop boundary-extendable edges {dropped}")

    while True:
        identity_edges = [
            e.id for e in q.scenario.edges if not e.is_loop and _edge_pattern(q, e.id) == I2
        ]
        if identity_edges:
            e = identity_edges[0]
            q = transport_collapse(collapse_edge(q.scenario, e), q)
            trace.append(f"collapse identity edge {e}")
            continue
        flips = [e for e in q.scenario.edges if not e.is_loop and _edge_pattern(q, e.id) == ANTIDIAG]
        if flips:
            e = flips[0]
            labels = {v: int(v == e.target) for v in q.scenario.vertices}
            q = act(labels, q)
            trace.append(f"shift outcomes at {e.target} so antidiagonal edge {e.id} becomes the identity")
            continue
        break

    identity_loops = [e.id for e in q.scenario.edges if e.is_loop and _edge_pattern(q, e.id) == I2]
    if identity_loops:
        s = q.scenario
        for e in identity_loops:
            s = s.without_edge(e)
        q = restrict(q, s)
        trace.append(f"omit identity loops {identity_loops}")

    odd = [e for e in q.scenario.edges if e.is_loop and _edge_pattern(q, e.id) == ANTIDIAG]
    if odd:
        trace.append(f"single-edge circle {odd[0].id} carries the antidiagonal: odd PR circle")
        decision = SCDecision(True, odd[0].source, "odd antidiagonal circle", tuple(trace))
    else:
        category = build_category(q)
        found = None
        for x in sorted(category.objects):
            if category.contains(x, x, A) and category.contains(x, x, D):
                found = x
                break
        if found is not None:
            trace.append(f"{{A, D}} ⊂ 𝒞({found},{found}): empty support")
            decision = SCDecision(True, found, "{A, D} endomorphisms", tuple(trace))
        else:
            trace.append("no 𝒞(x,x) holds both A and D: category has non-empty support")
            decision = SCDecision(False, None, "reduced category has non-empty support", tuple(trace))

    if cross_check:
        empty = not category_support(build_category(p))
        if empty != decision.strongly_contextual:
            raise DeciderDisagreement(
                f"Reduction says SC={decision.strongly_contextual}, support emptiness says {empty}"
            )
    return decision
