"""
Measurement scenarios: finite 1-dimensional simplicial sets
Encoded as multigraphs with loops; edge source is the d₁ face, target the d₀ face
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

import networkx as nx

from .errors import LoopCollapse, NotASubcomplex, NotComposable, UnknownEdge, UnknownVertex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class Step:
    """One edge traversal; forward goes source -> target"""

    edge: str
    forward: bool = True

    def flipped(self) -> "Step":
        return Step(self.edge, not self.forward)


@dataclass(frozen=True)
class Walk:
    steps: Tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(step.edge for step in self.steps)

    def reversed(self) -> "Walk":
        return type(self)(tuple(step.flipped() for step in reversed(self.steps)))

    def describe(self) -> List[str]:
        return [step.edge if step.forward else f"{step.edge}^T" for step in self.steps]


@dataclass(frozen=True)
class Circle(Walk):
    """A closed walk with pairwise distinct edges, kept in canonical form"""

    @classmethod
    def canonical(cls, steps: Iterable[Step], rank: Optional[Mapping[str, int]] = None) -> "Circle":
        """Rotate to start at the least edge, forward; edges compare by `rank` when given, else by id"""
        steps = tuple(steps)
        if not steps:
            raise NotComposable("A circle needs at least one edge")
        if len({s.edge for s in steps}) != len(steps):
            raise NotComposable("Circle edges must be pairwise distinct")
        order = rank.__getitem__ if rank is not None else str
        least = min(range(len(steps)), key=lambda i: order(steps[i].edge))
        if not steps[least].forward:
            steps = tuple(s.flipped() for s in reversed(steps))
            least = len(steps) - 1 - least
        return cls(steps[least:] + steps[:least])

    def sort_key(self, rank: Optional[Mapping[str, int]] = None) -> Tuple[int, Tuple[Any, ...], Tuple[bool, ...]]:
        edges = tuple(rank[e] for e in self.edge_ids()) if rank is not None else self.edge_ids()
        return (len(self.steps), edges, tuple(not s.forward for s in self.steps))


@dataclass(frozen=True)
class Scenario:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    _edge_index: Dict[str, Edge] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise UnknownVertex("Vertex ids must be unique")
        known = set(self.vertices)
        for edge in self.edges:
            if edge.id in self._edge_index:
                raise UnknownEdge(f"Duplicate edge id {edge.id!r}")
            for endpoint in (edge.source, edge.target):
                if endpoint not in known:
                    raise UnknownVertex(f"Edge {edge.id!r} references unknown vertex {endpoint!r}")
            self._edge_index[edge.id] = edge

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Tuple[str, str, str]]) -> "Scenario":
        """Build from (id, source, target) triples"""
        return cls(tuple(vertices), tuple(Edge(e, s, t) for e, s, t in edges))

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise UnknownEdge(f"Unknown edge {edge_id!r}") from None

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._edge_index

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def edge_rank(self) -> Dict[str, int]:
        """Position of each edge in declaration order"""
        return {e.id: i for i, e in enumerate(self.edges)}

    def incident(self, vertex: str) -> List[Edge]:
        return [e for e in self.edges if vertex in (e.source, e.target)]

    def degree(self, vertex: str) -> int:
        return sum((e.source == vertex) + (e.target == vertex) for e in self.edges)

    def step_ends(self, step: Step) -> Tuple[str, str]:
        edge = self.edge(step.edge)
        return (edge.source, edge.target) if step.forward else (edge.target, edge.source)

    def walk_endpoints(self, walk: Walk) -> Tuple[str, str]:
        """Initial and terminal vertex; raises if consecutive steps do not meet"""
        if not walk.steps:
            raise NotComposable("Empty walk has no endpoints")
        start, current = self.step_ends(walk.steps[0])
        for step in walk.steps[1:]:
            tail, head = self.step_ends(step)
            if tail != current:
                raise NotComposable(f"Step {step.edge!r} starts at {tail!r}, walk is at {current!r}")
            current = head
        return start, current

    def circle_vertices(self, circle: Walk) -> List[str]:
        start, _ = self.walk_endpoints(circle)
        out = [start]
        for step in circle.steps[:-1]:
            out.append(self.step_ends(step)[1])
        return out

    def is_circle(self, walk: Walk) -> bool:
        try:
            start, end = self.walk_endpoints(walk)
        except NotComposable:
            return False
        return start == end and len(set(walk.edge_ids())) == len(walk.steps)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.source, e.target, key=e.id)
        return graph

    def without_edge(self, edge_id: str) -> "Scenario":
        self.edge(edge_id)
        return Scenario(self.vertices, tuple(e for e in self.edges if e.id != edge_id))

    def subscenario(self, vertices: Iterable[str], edge_ids: Iterable[str]) -> "Scenario":
        vertex_set = set(vertices)
        wanted = set(edge_ids)
        if not vertex_set <= set(self.vertices) or not wanted <= set(self._edge_index):
            raise NotASubcomplex("Subscenario must use existing vertices and edges")
        edges = tuple(e for e in self.edges if e.id in wanted)
        for e in edges:
            if e.source not in vertex_set or e.target not in vertex_set:
                raise NotASubcomplex(f"Edge {e.id!r} needs both endpoints in the subscenario")
        return Scenario(tuple(v for v in self.vertices if v in vertex_set), edges)

    def circle_scenario(self, circle: Walk) -> "Scenario":
        return self.subscenario(self.circle_vertices(circle), circle.edge_ids())

    def betti_number(self) -> int:
        return len(self.edges) - len(self.vertices) + len(connected_components(self))


def connected_components(s: Scenario) -> List[FrozenSet[str]]:
    components = [frozenset(c) for c in nx.connected_components(s.to_networkx())]
    return sorted(components, key=lambda c: min(c))


def is_connected(s: Scenario) -> bool:
    return len(s.vertices) > 0 and len(connected_components(s)) == 1


def spanning_forest(s: Scenario, order: Optional[List[str]] = None) -> Dict[str, Optional[Tuple[str, Step]]]:
    """
    BFS spanning forest.

    Maps each vertex to (parent, step from parent to vertex), or None for roots.
    Roots and neighbors are visited in `order` (vertex id order by default).
    """
    rank = {v: i for i, v in enumerate(order or sorted(s.vertices))}
    parent: Dict[str, Optional[Tuple[str, Step]]] = {}
    for root in sorted(s.vertices, key=rank.__getitem__):
        if root in parent:
            continue
        parent[root] = None
        queue = [root]
        while queue:
            u = queue.pop(0)
            moves = []
            for e in s.edges:
                if e.is_loop:
                    continue
                if e.source == u:
                    moves.append((rank[e.target], e.id, e.target, Step(e.id, True)))
                elif e.target == u:
                    moves.append((rank[e.source], e.id, e.source, Step(e.id, False)))
            for _, _, v, step in sorted(moves):
                if v not in parent:
                    parent[v] = (u, step)
                    queue.append(v)
    return parent


def tree_path(forest: Dict[str, Optional[Tuple[str, Step]]], start: str, end: str) -> List[Step]:
    """Steps from start to end inside one tree of the forest"""

    def to_root(v: str) -> List[str]:
        chain = [v]
        while forest[chain[-1]] is not None:
            chain.append(forest[chain[-1]][0])  # type: ignore[index]
        return chain

    up, down = to_root(start), to_root(end)
    common = set(up) & set(down)
    if not common:
        raise NotComposable(f"{start!r} and {end!r} lie in different components")
    lca = next(v for v in up if v in common)
    steps: List[Step] = []
    for v in up[: up.index(lca)]:
        steps.append(forest[v][1].flipped())  # type: ignore[index]
    descent = [forest[v][1] for v in down[: down.index(lca)]]  # type: ignore[index]
    steps.extend(reversed(descent))
    return steps


def cycle_basis(s: Scenario, order: Optional[List[str]] = None) -> List[Circle]:
    """Fundamental circles of a BFS spanning forest; loops give one-edge circles"""
    forest = spanning_forest(s, order)
    rank = s.edge_rank
    tree_edges = {entry[1].edge for entry in forest.values() if entry is not None}
    basis = []
    for e in s.edges:
        if e.id in tree_edges:
            continue
        steps = [Step(e.id, True)] + tree_path(forest, e.target, e.source)
        basis.append(Circle.canonical(steps, rank))
    logger.debug(f"Cycle basis: {len(basis)} circles for {len(s.edges)} edges")
    return basis


def enumerate_circles(s: Scenario, max_len: int) -> Iterator[Circle]:
    """
    Every vertex-simple circle of length <= max_len, once each.

    A circle is rooted at its earliest declared edge, traversed forward; the
    rest of the circle is a simple path back using only later edges.
    """
    if max_len < 1:
        return
    rank = s.edge_rank
    for i, first in enumerate(s.edges):
        if first.is_loop:
            yield Circle((Step(first.id, True),))
            continue
        home = first.source
        later = [e for e in s.edges[i + 1 :] if not e.is_loop]
        stack: List[Tuple[str, List[Step], Set[str]]] = [
            (first.target, [Step(first.id, True)], {first.source, first.target})
        ]
        found: List[Circle] = []
        while stack:
            here, path, seen = stack.pop()
            if len(path) >= max_len:
                continue
            for e in later:
                if e.source == here:
                    step, nxt = Step(e.id, True), e.target
                elif e.target == here:
                    step, nxt = Step(e.id, False), e.source
                else:
                    continue
                if any(st.edge == e.id for st in path):
                    continue
                if nxt == home:
                    found.append(Circle(tuple(path + [step])))
                elif nxt not in seen:
                    stack.append((nxt, path + [step], seen | {nxt}))
        yield from sorted(found, key=lambda c: c.sort_key(rank))


@dataclass(frozen=True)
class CollapseMap:
    """Quotient contracting one non-loop edge; the merged vertex keeps the source id"""

    source: Scenario
    collapsed_edge: str
    result: Scenario
    vertex_map: Dict[str, str]
    edge_map: Dict[str, Optional[str]]

    @property
    def merged_vertex(self) -> str:
        return self.vertex_map[self.source.edge(self.collapsed_edge).source]

    def pullback_labeling(self, labels: Dict[str, int]) -> Dict[str, int]:
        return {v: labels[self.vertex_map[v]] for v in self.source.vertices}


def collapse_edge(s: Scenario, edge_id: str) -> CollapseMap:
    edge = s.edge(edge_id)
    if edge.is_loop:
        raise LoopCollapse(f"Edge {edge_id!r} is a loop; loops are not collapsed")
    keep, drop = edge.source, edge.target
    vertex_map = {v: (keep if v == drop else v) for v in s.vertices}
    edges = tuple(
        Edge(e.id, vertex_map[e.source], vertex_map[e.target]) for e in s.edges if e.id != edge_id
    )
    result = Scenario(tuple(v for v in s.vertices if v != drop), edges)
    edge_map: Dict[str, Optional[str]] = {e.id: e.id for e in edges}
    edge_map[edge_id] = None
    logger.debug(f"Collapsed {edge_id}: {drop} -> {keep}")
    return CollapseMap(s, edge_id, result, vertex_map, edge_map)


def cycle_scenario(n: int) -> Scenario:
    """N-cycle v0 -> v1 -> ... -> v0 with edges e0..e{n-1}; n = 1 is a loop"""
    vertices = [f"v{i}" for i in range(n)]
    return Scenario.build(vertices, [(f"e{i}", vertices[i], vertices[(i + 1) % n]) for i in range(n)])


def theta_scenario(k: int = 3) -> Scenario:
    return Scenario.build(["u", "v"], [(f"e{i}", "u", "v") for i in range(k)])


def path_scenario(n_edges: int) -> Scenario:
    vertices = [f"v{i}" for i in range(n_edges + 1)]
    return Scenario.build(vertices, [(f"e{i}", vertices[i], vertices[i + 1]) for i in range(n_edges)])
