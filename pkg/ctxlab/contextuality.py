"""
Contextuality deciders
Support search, the PR-circle decider, exact LP membership and the vertex test
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .budget import LabelingBudget
from .config import config
from .errors import DeciderDisagreement, TooLarge, WrongOutcomeArity, WrongSemiring
from .homotopy import NerveLabeling, circle_invariant, labeling_of_differences
from .logiccat import BoolMatrix, build_category, sc_criterion
from .lp import feasible_point, rank, solve_exact
from .scenario import Circle, cycle_basis
from .semiring import Dist, Kind
from .simpdist import (
    OutcomeLabeling,
    SimpDist,
    boolean_projection,
    is_deterministic,
    p_minus,
    p_plus,
    restrict,
    source_marginal,
    target_marginal,
)

logger = logging.getLogger(__name__)


# -- support ------------------------------------------------------------------


@dataclass(frozen=True)
class SupportResult:
    labelings: Tuple[OutcomeLabeling, ...]

    @property
    def empty(self) -> bool:
        return not self.labelings

    def __len__(self) -> int:
        return len(self.labelings)


def support(p: SimpDist) -> SupportResult:
    """
    Every labeling with nonzero weight on all simplices.

    Vertices are tried by descending degree, values by how many nonzero
    entries they take part in.
    """
    s, d = p.scenario, p.d
    order = sorted(s.vertices, key=lambda v: (-s.degree(v), v))
    position = {v: i for i, v in enumerate(order)}
    # edges checked once both endpoints are labeled
    due: Dict[str, List[Tuple[str, str, str]]] = {v: [] for v in order}
    for e in s.edges:
        later = max(e.source, e.target, key=position.__getitem__)
        due[later].append((e.id, e.source, e.target))

    def value_order(v: str) -> List[int]:
        q = p.vertex_distribution(v)
        weight = {a: sum(1 for e in s.incident(v) for (x, y) in p.matrix(e.id).support() if a in (x, y)) for a in range(d)}
        return sorted((a for a in range(d) if q[a] != 0), key=lambda a: (-weight[a], a))

    candidates = {v: value_order(v) for v in order}
    labels: Dict[str, int] = {}
    found: List[OutcomeLabeling] = []

    def extend(i: int) -> None:
        if i == len(order):
            found.append(OutcomeLabeling.of(labels))
            return
        v = order[i]
        for a in candidates[v]:
            labels[v] = a
            if all(p.matrix(e)[(labels[x], labels[y])] != 0 for e, x, y in due[v]):
                extend(i + 1)
            del labels[v]

    extend(0)
    return SupportResult(tuple(sorted(found)))


# -- PR circles ---------------------------------------------------------------


class ParityUnionFind:
    """Union-find with the parity of each element relative to its root"""

    def __init__(self, items: List[str]):
        self.parents: Dict[str, Optional[str]] = {v: None for v in items}
        self.parity: Dict[str, int] = {v: 0 for v in items}
        self.sizes: Dict[str, int] = {v: 1 for v in items}

    def find(self, v: str) -> Tuple[str, int]:
        path = []
        while self.parents[v] is not None:
            path.append(v)
            v = self.parents[v]  # type: ignore[assignment]
        root = v
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parents[node] = root
        return root, (self.parity[path[0]] if path else 0)

    def merge(self, u: str, v: str, label: int) -> bool:
        """Record parity(u) xor parity(v) = label; False when it contradicts"""
        ru, pu = self.find(u)
        rv, pv = self.find(v)
        if ru == rv:
            return (pu ^ pv) == label
        if self.sizes[ru] < self.sizes[rv]:
            ru, rv, pu, pv = rv, ru, pv, pu
        self.parents[rv] = ru
        self.parity[rv] = pu ^ pv ^ label
        self.sizes[ru] += self.sizes[rv]
        return True


@dataclass(frozen=True)
class PRCircleResult:
    strongly_contextual: bool
    circle: Optional[Circle] = None
    minus_edges: Tuple[str, ...] = ()

    def as_dict(self) -> Dict[str, Any]:
        return {
            "strongly_contextual": self.strongly_contextual,
            "circle": self.circle.describe() if self.circle else None,
            "minus_edges": list(self.minus_edges),
        }


def pr_circle_decider(p: SimpDist) -> PRCircleResult:
    """SC iff some circle carries only p₊/p₋ with an odd number of p₋"""
    if p.d != 2:
        raise WrongOutcomeArity(f"The PR-circle decider needs d=2, got d={p.d}")
    if p.kind is not Kind.RATIONAL:
        raise WrongSemiring("The PR-circle decider is scoped to rational distributions")
    plus, minus = p_plus(), p_minus()
    labels: Dict[str, int] = {}
    for e, m in p.matrices:
        if m == plus:
            labels[e] = 0
        elif m == minus:
            labels[e] = 1
    s = p.scenario
    uf = ParityUnionFind(list(s.vertices))
    balanced = True
    for e in s.edges:
        if e.id in labels and not uf.merge(e.source, e.target, labels[e.id]):
            balanced = False
    if balanced:
        return PRCircleResult(False)
    sub = s.subscenario(s.vertices, labels)
    odd = [c for c in cycle_basis(sub) if circle_invariant(c, labels, 2) == 1]
    rank = s.edge_rank
    witness = min(odd, key=lambda c: c.sort_key(rank))
    minus_edges = tuple(e for e in witness.edge_ids() if labels[e] == 1)
    logger.debug(f"Odd PR circle {witness.describe()}")
    return PRCircleResult(True, witness, minus_edges)


def homotopical_witness(p: SimpDist, circle: Circle) -> Optional[NerveLabeling]:
    """φ with D(d₀)∘(p|_C) = δ^φ and nonzero circle invariant, else None"""
    sub = restrict(p, p.scenario.circle_scenario(circle))
    labels = labeling_of_differences(sub)
    if labels is None or circle_invariant(circle, labels, p.d) == 0:
        return None
    return labels


# -- strong contextuality -------------------------------------------------------


@dataclass(frozen=True)
class SCResult:
    strongly_contextual: bool
    support: SupportResult
    explanation: Dict[str, Any] = field(default_factory=dict)


def is_strongly_contextual(p: SimpDist, cross_check: Optional[bool] = None) -> SCResult:
    """Support emptiness, checked against the d = 2 deciders that apply"""
    cross_check = config.CROSS_CHECK if cross_check is None else cross_check
    supp = support(p)
    verdict = supp.empty
    explanation: Dict[str, Any] = {"support_size": len(supp)}
    if cross_check and p.d == 2 and p.scenario.edges:
        if p.kind is Kind.RATIONAL:
            pr = pr_circle_decider(p)
            explanation["pr_circle"] = pr.as_dict()
            if pr.strongly_contextual != verdict:
                raise DeciderDisagreement(f"Support says SC={verdict}, PR-circle decider says {pr.strongly_contextual}")
        criterion = sc_criterion(build_category(boolean_projection(p)))
        explanation["boolean_criterion"] = criterion.as_dict()
        if criterion.strongly_contextual != verdict:
            raise DeciderDisagreement(
                f"Support says SC={verdict}, Boolean criterion says {criterion.strongly_contextual}"
            )
    return SCResult(verdict, supp, explanation)


# -- contextuality ---------------------------------------------------------------


@dataclass(frozen=True)
class NCWitness:
    weights: Tuple[Tuple[OutcomeLabeling, Fraction], ...]

    def reproduces(self, p: SimpDist) -> bool:
        if sum(w for _, w in self.weights) != 1:
            return False
        for e in p.scenario.edges:
            m = p.matrix(e.id)
            for a in range(p.d):
                for b in range(p.d):
                    total = sum(w for phi, w in self.weights if (phi[e.source], phi[e.target]) == (a, b))
                    if total != m[(a, b)]:
                        return False
        for v, q in p.isolated:
            for a in range(p.d):
                if sum(w for phi, w in self.weights if phi[v] == a) != q[a]:
                    return False
        return True

    def as_dict(self) -> List[Dict[str, Any]]:
        return [{"labels": phi.as_dict(), "weight": str(w)} for phi, w in self.weights]


@dataclass(frozen=True)
class ContextualityResult:
    contextual: bool
    witness: Optional[NCWitness] = None


def _constraint_system(p: SimpDist, labelings: List[OutcomeLabeling]) -> Tuple[List[List[Fraction]], List[Fraction]]:
    A: List[List[Fraction]] = []
    b: List[Fraction] = []
    A.append([Fraction(1)] * len(labelings))
    b.append(Fraction(1))
    for e in p.scenario.edges:
        m = p.matrix(e.id)
        for a in range(p.d):
            for c in range(p.d):
                A.append([Fraction(int((phi[e.source], phi[e.target]) == (a, c))) for phi in labelings])
                b.append(Fraction(m[(a, c)]))
    for v, q in p.isolated:
        for a in range(p.d):
            A.append([Fraction(int(phi[v] == a)) for phi in labelings])
            b.append(Fraction(q[a]))
    return A, b


def is_contextual(p: SimpDist, budget: Optional[LabelingBudget] = None) -> ContextualityResult:
    """
    Exact membership in the image of Θ.

    Labelings outside the support must get weight zero, so only support
    labelings become LP variables.
    """
    budget = budget or LabelingBudget()
    budget.check(len(p.scenario.vertices), p.d)
    labelings = list(support(p).labelings)
    if not labelings:
        return ContextualityResult(True)
    if p.kind is Kind.BOOLEAN:
        # Θ over 𝔹 is the OR of the chosen deltas
        covered = all(
            any((phi[e.source], phi[e.target]) == ab for phi in labelings)
            for e in p.scenario.edges
            for ab in p.matrix(e.id).support()
        )
        covered = covered and all(any(phi[v] == a for phi in labelings) for v, q in p.isolated for a in q.support())
        if not covered:
            return ContextualityResult(True)
        return ContextualityResult(False, NCWitness(tuple((phi, Fraction(1)) for phi in labelings)))
    A, b = _constraint_system(p, labelings)
    x = feasible_point(A, b)
    if x is None:
        return ContextualityResult(True)
    witness = NCWitness(tuple((phi, w) for phi, w in zip(labelings, x) if w != 0))
    assert witness.reproduces(p)
    return ContextualityResult(False, witness)


def brute_force_decomposition(p: SimpDist, limit: int = 16) -> Optional[NCWitness]:
    """
    Search subsets of support labelings for an exact nonnegative decomposition.

    Any decomposition can be reduced to one over linearly independent
    deterministic distributions, so independent subsets suffice.
    """
    if p.kind is not Kind.RATIONAL:
        raise WrongSemiring("Decomposition search is defined for rational distributions")
    labelings = list(support(p).labelings)
    if len(labelings) > limit:
        raise TooLarge(f"{len(labelings)} support labelings exceeds decomposition limit {limit}")
    A, b = _constraint_system(p, labelings)
    for size in range(1, len(labelings) + 1):
        for subset in itertools.combinations(range(len(labelings)), size):
            columns = [[row[j] for j in subset] for row in A]
            if rank(columns) != size:
                continue
            x = solve_exact(columns, b)
            if x is not None and all(w >= 0 for w in x):
                return NCWitness(tuple((labelings[j], w) for j, w in zip(subset, x) if w != 0))
    return None


# -- vertex test -------------------------------------------------------------------


def is_polytope_vertex(p: SimpDist) -> bool:
    """
    p is the only solution of the constraints active at p.

    Unknowns are the nonzero entries; rows encode per-edge normalization and
    equality of every incident marginal at each vertex.
    """
    if p.kind is not Kind.RATIONAL:
        raise WrongSemiring("The vertex test is defined for rational distributions")
    unknowns: Dict[Tuple[str, Any], int] = {}
    for e, m in p.matrices:
        for ab in sorted(m.support()):
            unknowns[(e, ab)] = len(unknowns)
    for v, q in p.isolated:
        for a in sorted(q.support()):
            unknowns[(f"vertex:{v}", a)] = len(unknowns)
    if not unknowns:
        return True
    n = len(unknowns)
    rows: List[List[Fraction]] = []

    def row_for(keys: List[Tuple[str, Any]], signs: List[int]) -> List[Fraction]:
        row = [Fraction(0)] * n
        for key, sign in zip(keys, signs):
            if key in unknowns:
                row[unknowns[key]] += sign
        return row

    d = p.d
    for e, m in p.matrices:
        rows.append(row_for([(e, ab) for ab in m.support()], [1] * len(m.support())))
    for v, q in p.isolated:
        rows.append(row_for([(f"vertex:{v}", a) for a in q.support()], [1] * len(q.support())))

    # each incident edge end, as the entries summing to outcome a at v
    for v in p.scenario.vertices:
        ends: List[Tuple[str, int]] = []
        for e in p.scenario.incident(v):
            if e.source == v:
                ends.append((e.id, 0))
            if e.target == v:
                ends.append((e.id, 1))
        for (e0, side0), (e1, side1) in zip(ends, ends[1:]):
            for a in range(d):
                keys0 = [(e0, ab) for ab in p.matrix(e0).support() if ab[side0] == a]
                keys1 = [(e1, ab) for ab in p.matrix(e1).support() if ab[side1] == a]
                row = row_for(keys0 + keys1, [1] * len(keys0) + [-1] * len(keys1))
                if any(row):
                    rows.append(row)
    return rank(rows) == n


# -- marginal inequalities -----------------------------------------------------


def marginal_inequalities(m: Dist) -> List[Dict[str, Any]]:
    """
    Implications between the Boolean pattern of a d = 2 edge and its marginals.

    ps0 / pt0 are the outcome-0 probabilities at the source / target.
    """
    pattern = BoolMatrix.from_dist(m, 2).name()
    ps0 = source_marginal(m)[0]
    pt0 = target_marginal(m)[0]
    rules = {
        "A": ("ps0 + pt0 > 1", ps0 + pt0 > 1),
        "D": ("ps0 + pt0 < 1", ps0 + pt0 < 1),
        "B": ("ps0 > pt0", ps0 > pt0),
        "B^T": ("ps0 < pt0", ps0 < pt0),
        "I": ("ps0 = pt0", ps0 == pt0),
        "antidiag": ("ps0 = 1 - pt0", ps0 == 1 - pt0),
    }
    if pattern not in rules:
        return []
    statement, holds = rules[pattern]
    return [{"pattern": pattern, "statement": statement, "holds": holds}]


# -- classification -------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    deterministic: Optional[OutcomeLabeling]
    vertex: Optional[bool]
    contextual: bool
    strongly_contextual: bool
    sc: SCResult
    nc_witness: Optional[NCWitness]

    def flags(self) -> Dict[str, Optional[bool]]:
        return {
            "deterministic": self.deterministic is not None,
            "vertex": self.vertex,
            "contextual": self.contextual,
            "strongly_contextual": self.strongly_contextual,
        }

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = dict(self.flags())
        out["witnesses"] = {
            "deterministic_labeling": self.deterministic.as_dict() if self.deterministic else None,
            "support": [phi.as_dict() for phi in self.sc.support.labelings],
            "nc_witness": self.nc_witness.as_dict() if self.nc_witness else None,
            "deciders": self.sc.explanation,
        }
        return out


def classify(p: SimpDist, budget: Optional[LabelingBudget] = None, cross_check: Optional[bool] = None) -> Classification:
    det = is_deterministic(p)
    sc = is_strongly_contextual(p, cross_check)
    ctx = is_contextual(p, budget)
    vertex = is_polytope_vertex(p) if p.kind is Kind.RATIONAL else None
    result = Classification(det, vertex, ctx.contextual, sc.strongly_contextual, sc, ctx.witness)
    if result.strongly_contextual and not result.contextual:
        raise DeciderDisagreement("Strongly contextual distribution classified as non-contextual")
    if det is not None and (result.contextual or vertex is False):
        raise DeciderDisagreement("Deterministic distribution must be a non-contextual vertex")
    logger.debug(f"Classified: {result.flags()}")
    return result
