"""
Simplicial distributions on (X, Δ_{ℤ_d})
One d×d outcome matrix per edge, indexed (source outcome, target outcome)
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    EvenMinusCount,
    InconsistentDistribution,
    InvalidParams,
    MarginMismatch,
    NotASubcomplex,
    NotCollapsible,
    NotComposable,
    UnknownVertex,
    WrongOutcomeArity,
    WrongSemiring,
)
from .scenario import Circle, CollapseMap, Scenario, Step, Walk
from .semiring import Dist, Kind, Outcome, Value, boolean_projection as project_dist, delta, mix, uniform

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True, order=True)
class OutcomeLabeling:
    """A ℤ_d label per vertex, stored as sorted (vertex, label) pairs"""

    items: Tuple[Tuple[str, int], ...]

    @classmethod
    def of(cls, labels: Mapping[str, int]) -> "OutcomeLabeling":
        return cls(tuple(sorted((v, int(a)) for v, a in labels.items())))

    def __getitem__(self, vertex: str) -> int:
        for v, a in self.items:
            if v == vertex:
                return a
        raise UnknownVertex(f"Labeling has no value for {vertex!r}")

    def as_dict(self) -> Dict[str, int]:
        return dict(self.items)

    def shifted(self, other: "OutcomeLabeling", d: int) -> "OutcomeLabeling":
        theirs = other.as_dict()
        return OutcomeLabeling(tuple((v, (a + theirs[v]) % d) for v, a in self.items))


# -- matrices ---------------------------------------------------------------


def matrix_from_rows(rows: Sequence[Sequence[object]], kind: Kind = Kind.RATIONAL) -> Dist:
    d = len(rows)
    if any(len(r) != d for r in rows):
        raise WrongOutcomeArity(f"Edge matrix must be square, got rows of lengths {[len(r) for r in rows]}")
    return Dist.from_weights({(a, b): rows[a][b] for a in range(d) for b in range(d)}, kind)


def matrix_rows(m: Dist, d: int) -> List[List[Value]]:
    return [[m[(a, b)] for b in range(d)] for a in range(d)]


def transpose(m: Dist) -> Dist:
    return Dist.from_weights({(b, a): w for (a, b), w in m.items()}, m.kind, check=False)


def source_marginal(m: Dist) -> Dist:
    return m.pushforward(lambda ab: ab[0])


def target_marginal(m: Dist) -> Dist:
    return m.pushforward(lambda ab: ab[1])


def to_nerve_coordinates(m: Dist, d: int) -> Dist:
    """(a, b) -> (a, b - a)"""
    return m.pushforward(lambda ab: (ab[0], (ab[1] - ab[0]) % d))


def from_nerve_coordinates(m: Dist, d: int) -> Dist:
    """(a, g) -> (a, a + g)"""
    return m.pushforward(lambda ag: (ag[0], (ag[0] + ag[1]) % d))


def is_diagonal(m: Dist) -> bool:
    return all(a == b for (a, b) in m.support())


def p_plus() -> Dist:
    return matrix_from_rows([[Fraction(1, 2), 0], [0, Fraction(1, 2)]])


def p_minus() -> Dist:
    return matrix_from_rows([[0, Fraction(1, 2)], [Fraction(1, 2), 0]])


# -- simplicial distributions -----------------------------------------------


@dataclass(frozen=True)
class SimpDist:
    """
    Edge matrices over one scenario.

    Vertex distributions are the marginals of incident edges; vertices with
    no incident edge carry their distribution in `isolated`.
    """

    scenario: Scenario
    d: int
    kind: Kind
    matrices: Tuple[Tuple[str, Dist], ...]
    isolated: Tuple[Tuple[str, Dist], ...] = ()
    _by_edge: Dict[str, Dist] = field(default_factory=dict, compare=False, hash=False, repr=False)
    _marginals: Dict[str, Dist] = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def create(
        cls,
        scenario: Scenario,
        d: int,
        matrices: Mapping[str, Dist],
        isolated: Optional[Mapping[str, Dist]] = None,
        kind: Optional[Kind] = None,
    ) -> "SimpDist":
        if kind is None:
            kinds = {m.kind for m in matrices.values()} | {q.kind for q in (isolated or {}).values()}
            kind = kinds.pop() if len(kinds) == 1 else Kind.RATIONAL
        ordered = tuple((e, matrices[e]) for e in scenario.edge_ids if e in matrices)
        if len(ordered) != len(scenario.edges) or len(matrices) != len(scenario.edges):
            missing = set(scenario.edge_ids) ^ set(matrices)
            raise InconsistentDistribution(f"Edge matrices do not match scenario edges: {sorted(missing)}")
        loose = tuple(sorted((isolated or {}).items()))
        return cls(scenario, d, kind, ordered, loose)

    def __post_init__(self) -> None:
        if self.d < 2:
            raise WrongOutcomeArity(f"Outcome group order must be at least 2, got {self.d}")
        self._by_edge.update(self.matrices)
        for edge_id, m in self.matrices:
            if m.kind is not self.kind:
                raise WrongSemiring(f"Edge {edge_id!r} is {m.kind.value}, expected {self.kind.value}")
            for outcome in m.support():
                if not (isinstance(outcome, tuple) and len(outcome) == 2 and all(0 <= x < self.d for x in outcome)):
                    raise WrongOutcomeArity(f"Edge {edge_id!r} has outcome {outcome!r} outside ℤ_{self.d}²")
            edge = self.scenario.edge(edge_id)
            for vertex, marginal in ((edge.source, source_marginal(m)), (edge.target, target_marginal(m))):
                seen = self._marginals.setdefault(vertex, marginal)
                if seen != marginal:
                    raise InconsistentDistribution(
                        f"Vertex {vertex!r} marginals disagree at edge {edge_id!r}: {seen} vs {marginal}"
                    )
        for vertex, q in self.isolated:
            if vertex in self._marginals:
                raise InconsistentDistribution(f"Vertex {vertex!r} has incident edges; its distribution is derived")
            if vertex not in self.scenario.vertices:
                raise UnknownVertex(f"Unknown vertex {vertex!r}")
            self._marginals[vertex] = q
        missing = [v for v in self.scenario.vertices if v not in self._marginals]
        if missing:
            raise InconsistentDistribution(f"No distribution for isolated vertices {missing}")

    def matrix(self, edge_id: str) -> Dist:
        self.scenario.edge(edge_id)
        return self._by_edge[edge_id]

    def step_matrix(self, step: Step) -> Dist:
        m = self.matrix(step.edge)
        return m if step.forward else transpose(m)

    def vertex_distribution(self, vertex: str) -> Dist:
        try:
            return self._marginals[vertex]
        except KeyError:
            raise UnknownVertex(f"Unknown vertex {vertex!r}") from None

    def edge_matrices(self) -> Dict[str, Dist]:
        return dict(self.matrices)

    def isolated_distributions(self) -> Dict[str, Dist]:
        return dict(self.isolated)


def vertex_distribution(p: SimpDist, vertex: str) -> Dist:
    return p.vertex_distribution(vertex)


def _isolated_vertices(s: Scenario) -> List[str]:
    touched = {e.source for e in s.edges} | {e.target for e in s.edges}
    return [v for v in s.vertices if v not in touched]


def deterministic(
    s: Scenario, labels: Mapping[str, int], d: int, kind: Kind = Kind.RATIONAL
) -> SimpDist:
    if isinstance(labels, OutcomeLabeling):
        labels = labels.as_dict()
    missing = [v for v in s.vertices if v not in labels]
    if missing:
        raise UnknownVertex(f"Labeling is not total, missing {missing}")
    matrices = {e.id: delta((labels[e.source] % d, labels[e.target] % d), kind) for e in s.edges}
    isolated = {v: delta(labels[v] % d, kind) for v in _isolated_vertices(s)}
    return SimpDist.create(s, d, matrices, isolated, kind)


def is_deterministic(p: SimpDist) -> Optional[OutcomeLabeling]:
    labels = {}
    for v in p.scenario.vertices:
        q = p.vertex_distribution(v)
        if not q.is_delta():
            return None
        labels[v] = q.entries[0][0]
    return OutcomeLabeling.of(labels)


def pr_box(s: Scenario, circle: Circle, minus_edges: Iterable[str], d: int = 2) -> SimpDist:
    """PR box on the circle's subscenario: p₊ on every edge except an odd set of p₋"""
    if d != 2:
        raise WrongOutcomeArity(f"PR boxes are defined for d=2, got d={d}")
    minus = set(minus_edges)
    if not minus <= set(circle.edge_ids()):
        raise NotASubcomplex(f"Minus edges {sorted(minus - set(circle.edge_ids()))} are not on the circle")
    if len(minus) % 2 == 0:
        raise EvenMinusCount(f"A PR box needs an odd number of p₋ edges, got {len(minus)}")
    if not s.is_circle(circle):
        raise NotComposable("PR box support must be a circle")
    sub = s.circle_scenario(circle)
    # p₊ and p₋ are symmetric, so step orientation leaves the matrix unchanged
    matrices = {e: (p_minus() if e in minus else p_plus()) for e in circle.edge_ids()}
    return SimpDist.create(sub, 2, matrices)


def section_T(s: Scenario, q: Mapping[str, Dist], d: int) -> SimpDist:
    """M_e(a, b) = q_e(b - a) / d"""
    matrices = {}
    for e in s.edges:
        qe = q[e.id]
        if qe.kind is not Kind.RATIONAL:
            raise WrongSemiring("The T-section is defined for rational distributions")
        matrices[e.id] = Dist.from_weights(
            {(a, b): qe[(b - a) % d] / d for a in range(d) for b in range(d)}, Kind.RATIONAL
        )
    isolated = {v: uniform(range(d)) for v in _isolated_vertices(s)}
    return SimpDist.create(s, d, matrices, isolated, Kind.RATIONAL)


def section_T_of_labeling(s: Scenario, edge_labels: Mapping[str, int], d: int) -> SimpDist:
    return section_T(s, {e.id: delta(edge_labels[e.id] % d) for e in s.edges}, d)


def edge_differences(p: SimpDist) -> Dict[str, Dist]:
    """D(d₀)∘p: push each edge matrix along (a, b) -> b - a"""
    return {e: m.pushforward(lambda ab, d=p.d: (ab[1] - ab[0]) % d) for e, m in p.matrices}


def act(labels: Mapping[str, int], p: SimpDist) -> SimpDist:
    """Group action: entry (a, b) of edge e moves to (a + φ(src), b + φ(tgt))"""
    if isinstance(labels, OutcomeLabeling):
        labels = labels.as_dict()
    d = p.d
    matrices = {}
    for e in p.scenario.edges:
        shift_s, shift_t = labels[e.source], labels[e.target]
        matrices[e.id] = Dist.from_weights(
            {((a + shift_s) % d, (b + shift_t) % d): w for (a, b), w in p.matrix(e.id).items()},
            p.kind,
            check=False,
        )
    isolated = {
        v: q.pushforward(lambda a, s=labels[v]: (a + s) % d) for v, q in p.isolated
    }
    return SimpDist.create(p.scenario, d, matrices, isolated, p.kind)


def compose_matrices(sigma: Dist, tau: Dist, middle: Dist, d: int) -> Dist:
    """
    Conditional composite Σ_c σ(a,c)·τ(c,b) / p_y(c), zero-marginal fibers skipped.

    In 𝔹 the division is the identity and this is the Boolean matrix product.
    """
    kind = sigma.kind
    acc: Dict[Outcome, Value] = {}
    for (a, c), ws in sigma.items():
        mc = middle[c]
        if mc == 0:
            continue
        for b in range(d):
            wt = tau[(c, b)]
            if wt == 0:
                continue
            term = kind.div(kind.mul(ws, wt), mc)
            acc[(a, b)] = kind.add(acc.get((a, b), kind.zero), term)
    return Dist.from_weights(acc, kind, check=False)


def compose(p: SimpDist, first: Step, second: Step) -> Dist:
    s = p.scenario
    _, y = s.step_ends(first)
    tail, _ = s.step_ends(second)
    if y != tail:
        raise NotComposable(f"{first.edge!r} ends at {y!r} but {second.edge!r} starts at {tail!r}")
    return compose_matrices(p.step_matrix(first), p.step_matrix(second), p.vertex_distribution(y), p.d)


def compose_walk(p: SimpDist, walk: Walk) -> Dist:
    """Left fold of compose along a walk"""
    s = p.scenario
    s.walk_endpoints(walk)
    acc = p.step_matrix(walk.steps[0])
    for step in walk.steps[1:]:
        middle = s.step_ends(step)[0]
        acc = compose_matrices(acc, p.step_matrix(step), p.vertex_distribution(middle), p.d)
    return acc


def glue(
    P: Dist,
    Q: Dist,
    left: Callable[[Outcome], Outcome],
    right: Callable[[Outcome], Outcome],
    join: Callable[[Outcome, Outcome], Outcome] = lambda x, y: (x, y),
) -> Dist:
    """T(P,Q)(x,y) = P(x)·Q(y) / r(z) on the fiber product left(x) = right(y) = z"""
    if P.kind is not Q.kind:
        raise WrongSemiring("Glue needs distributions of the same kind")
    shared = P.pushforward(left)
    if shared != Q.pushforward(right):
        raise MarginMismatch(f"Shared marginals differ: {shared} vs {Q.pushforward(right)}")
    kind = P.kind
    acc: Dict[Outcome, Value] = {}
    for x, wp in P.items():
        z = left(x)
        for y, wq in Q.items():
            if right(y) != z:
                continue
            acc[join(x, y)] = kind.div(kind.mul(wp, wq), shared[z])
    return Dist.from_weights(acc, kind)


def glue_edges(sigma: Dist, tau: Dist) -> Dist:
    """Glue two edge matrices along the middle vertex into (a, c, b) triples"""
    return glue(sigma, tau, lambda ac: ac[1], lambda cb: cb[0], lambda ac, cb: (ac[0], ac[1], cb[1]))


def restrict(p: SimpDist, sub: Scenario) -> SimpDist:
    if not set(sub.vertices) <= set(p.scenario.vertices):
        raise NotASubcomplex("Restriction target has unknown vertices")
    for e in sub.edges:
        if not p.scenario.has_edge(e.id) or p.scenario.edge(e.id) != e:
            raise NotASubcomplex(f"Edge {e.id!r} is not an edge of the scenario")
    matrices = {e.id: p.matrix(e.id) for e in sub.edges}
    isolated = {v: p.vertex_distribution(v) for v in _isolated_vertices(sub)}
    return SimpDist.create(sub, p.d, matrices, isolated, p.kind)


def boolean_projection(p: SimpDist) -> SimpDist:
    if p.kind is Kind.BOOLEAN:
        return p
    matrices = {e: project_dist(m) for e, m in p.matrices}
    isolated = {v: project_dist(q) for v, q in p.isolated}
    return SimpDist.create(p.scenario, p.d, matrices, isolated, Kind.BOOLEAN)


def mixture(components: Sequence[Tuple[Fraction, SimpDist]]) -> SimpDist:
    """Convex combination Σ wᵢ·pᵢ over a shared scenario"""
    if not components:
        raise InvalidParams("A mixture needs at least one component")
    base = components[0][1]
    if any(q.scenario != base.scenario or q.d != base.d for _, q in components):
        raise NotASubcomplex("Mixture components must share scenario and d")
    matrices = {e.id: mix((w, q.matrix(e.id)) for w, q in components) for e in base.scenario.edges}
    isolated = {v: mix((w, q.vertex_distribution(v)) for w, q in components) for v, _ in base.isolated}
    return SimpDist.create(base.scenario, base.d, matrices, isolated, Kind.RATIONAL)


def transport_collapse(cm: CollapseMap, p: SimpDist) -> SimpDist:
    """The unique p̄ on the collapsed scenario with π*(p̄) = p"""
    m = p.matrix(cm.collapsed_edge)
    if not is_diagonal(m):
        raise NotCollapsible(f"Edge {cm.collapsed_edge!r} has off-diagonal support {sorted(m.support())}")
    matrices = {cm.edge_map[e]: q for e, q in p.matrices if cm.edge_map[e] is not None}
    isolated = {cm.vertex_map[v]: q for v, q in p.isolated}
    merged = cm.merged_vertex
    if merged in _isolated_vertices(cm.result):
        isolated[merged] = source_marginal(m)
    return SimpDist.create(cm.result, p.d, matrices, isolated, p.kind)


def pullback_collapse(cm: CollapseMap, p_bar: SimpDist) -> SimpDist:
    """π*(p̄): the collapsed edge carries the diagonal of the merged vertex"""
    merged = p_bar.vertex_distribution(cm.merged_vertex)
    matrices = {e: p_bar.matrix(cm.edge_map[e]) for e in cm.source.edge_ids if cm.edge_map[e] is not None}
    matrices[cm.collapsed_edge] = merged.pushforward(lambda a: (a, a))
    isolated = {v: p_bar.vertex_distribution(cm.vertex_map[v]) for v in _isolated_vertices(cm.source)}
    return SimpDist.create(cm.source, p_bar.d, matrices, isolated, p_bar.kind)
