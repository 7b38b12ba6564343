"""
Homotopy data of nerve labelings X -> Nℤ_d
Circle invariants, null-homotopy witnesses, counting, H_φ and faces
"""
import itertools
import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from sympy import isprime

from .errors import NonPrimeD, NotConnected, NotInvariant, NullHomotopicInput, UnknownVertex
from .scenario import Circle, Scenario, Walk, cycle_basis, is_connected, spanning_forest
from .semiring import Dist, uniform
from .simpdist import SimpDist, edge_differences

logger = logging.getLogger(__name__)

NerveLabeling = Dict[str, int]


def circle_invariant(circle: Walk, labels: Mapping[str, int], d: int) -> int:
    """Signed sum of edge labels; reversed steps count negatively"""
    total = 0
    for step in circle.steps:
        total += labels[step.edge] if step.forward else -labels[step.edge]
    return total % d


@dataclass(frozen=True)
class NullHomotopyResult:
    null_homotopic: bool
    potential: Optional[Dict[str, int]]
    obstruction: Optional[Circle]

    def __bool__(self) -> bool:
        return self.null_homotopic


def vertex_potential(s: Scenario, labels: Mapping[str, int], d: int) -> Dict[str, int]:
    """ψ with ψ(root) = 0 propagated along the spanning forest by edge labels"""
    forest = spanning_forest(s)
    potential: Dict[str, int] = {}
    pending = list(forest)
    while pending:
        v = pending.pop(0)
        entry = forest[v]
        if entry is None:
            potential[v] = 0
            continue
        parent, step = entry
        if parent not in potential:
            pending.append(v)
            continue
        g = labels[step.edge]
        potential[v] = (potential[parent] + (g if step.forward else -g)) % d
    return potential


def is_null_homotopic(s: Scenario, labels: Mapping[str, int], d: int) -> NullHomotopyResult:
    for circle in cycle_basis(s):
        if circle_invariant(circle, labels, d) != 0:
            return NullHomotopyResult(False, None, circle)
    psi = vertex_potential(s, labels, d)
    # every edge label is the difference of the potential at its endpoints
    assert all((psi[e.target] - psi[e.source] - labels[e.id]) % d == 0 for e in s.edges)
    return NullHomotopyResult(True, psi, None)


def all_labelings(s: Scenario, d: int) -> Iterator[NerveLabeling]:
    ids = s.edge_ids
    for values in itertools.product(range(d), repeat=len(ids)):
        yield dict(zip(ids, values))


def _require_connected(s: Scenario) -> None:
    if not is_connected(s):
        raise NotConnected("Scenario must be connected")


def count_non_null_homotopic(s: Scenario, d: int) -> int:
    _require_connected(s)
    return d ** len(s.edges) - d ** (len(s.vertices) - 1)


def count_null_homotopic(s: Scenario, d: int) -> int:
    _require_connected(s)
    return d ** (len(s.vertices) - 1)


@dataclass(frozen=True)
class FaceStructure:
    """Face(φ) ≅ D(ℤ_d / H_φ)"""

    scenario: Scenario
    labels: Tuple[Tuple[str, int], ...]
    d: int
    generators: Tuple[int, ...]
    subgroup: FrozenSet[int]
    orbits: Tuple[FrozenSet[int], ...]

    @property
    def dimension(self) -> int:
        return len(self.orbits) - 1

    @property
    def labeling(self) -> NerveLabeling:
        return dict(self.labels)

    def as_dict(self) -> Dict[str, object]:
        return {
            "labels": self.labeling,
            "generators": list(self.generators),
            "subgroup": sorted(self.subgroup),
            "orbits": [sorted(o) for o in self.orbits],
            "dimension": self.dimension,
        }


def face_structure(s: Scenario, labels: Mapping[str, int], d: int) -> FaceStructure:
    _require_connected(s)
    generators = tuple(circle_invariant(c, labels, d) for c in cycle_basis(s))
    step = gcd(d, *generators)
    subgroup = frozenset(range(0, d, step))
    orbits = tuple(frozenset((a + h) % d for h in subgroup) for a in range(step))
    logger.debug(f"Face structure: generators={generators}, |H|={len(subgroup)}")
    return FaceStructure(s, tuple(sorted(labels.items())), d, generators, subgroup, orbits)


def face_member(fs: FaceStructure, base_vertex: str, p_v: Dist) -> SimpDist:
    """
    The unique element of Face(φ) with distribution p_v at base_vertex.

    Forward edges carry M_e(a, b) = p_src(a)·[b = a + φ(e)].
    """
    s, d, labels = fs.scenario, fs.d, fs.labeling
    if base_vertex not in s.vertices:
        raise UnknownVertex(f"Unknown vertex {base_vertex!r}")
    for a in range(d):
        for h in fs.subgroup:
            if p_v[a] != p_v[(a + h) % d]:
                raise NotInvariant(f"Distribution varies on the orbit of {a} under H={sorted(fs.subgroup)}")
    order = [base_vertex] + sorted(v for v in s.vertices if v != base_vertex)
    forest = spanning_forest(s, order)
    dists: Dict[str, Dist] = {base_vertex: p_v}
    for v in _tree_order(forest, order):
        entry = forest[v]
        if entry is None:
            continue
        parent, step = entry
        g = labels[step.edge] if step.forward else -labels[step.edge]
        dists[v] = dists[parent].pushforward(lambda a, g=g: (a + g) % d)
    matrices = {
        e.id: dists[e.source].pushforward(lambda a, g=labels[e.id]: (a, (a + g) % d)) for e in s.edges
    }
    isolated = {v: dists[v] for v in s.vertices if not s.incident(v)}
    return SimpDist.create(s, d, matrices, isolated, p_v.kind)


def _tree_order(forest: Mapping[str, Optional[Tuple[str, object]]], order: List[str]) -> List[str]:
    """Vertices with every parent before its children"""
    placed: List[str] = []
    done = set()
    pending = list(order)
    while pending:
        v = pending.pop(0)
        entry = forest[v]
        if entry is None or entry[0] in done:
            placed.append(v)
            done.add(v)
        else:
            pending.append(v)
    return placed


def unique_sc_vertex(s: Scenario, labels: Mapping[str, int], d: int) -> SimpDist:
    if not isprime(d):
        raise NonPrimeD(f"The unique strongly contextual vertex needs prime d, got {d}")
    if is_null_homotopic(s, labels, d):
        raise NullHomotopicInput("Labeling is null-homotopic; its face contains deterministic vertices")
    fs = face_structure(s, labels, d)
    return face_member(fs, sorted(s.vertices)[0], uniform(range(d)))


def labeling_of_differences(p: SimpDist) -> Optional[NerveLabeling]:
    """φ with D(d₀)∘p = δ^φ, or None when some edge difference is not deterministic"""
    out = {}
    for edge_id, q in edge_differences(p).items():
        if not q.is_delta():
            return None
        out[edge_id] = q.entries[0][0]
    return out
