"""
Tests for scenarios, walks, circles and collapse
"""
import networkx as nx
import pytest

from ctxlab.errors import LoopCollapse, NotASubcomplex, NotComposable, UnknownEdge, UnknownVertex
from ctxlab.homotopy import circle_invariant
from ctxlab.scenario import (
    Circle,
    Scenario,
    Step,
    Walk,
    collapse_edge,
    connected_components,
    cycle_basis,
    cycle_scenario,
    enumerate_circles,
    is_connected,
    path_scenario,
    spanning_forest,
    theta_scenario,
)


class TestScenario:
    """Test scenario construction and queries"""

    def test_rejects_unknown_endpoint(self):
        """Test that edges must reference known vertices"""
        with pytest.raises(UnknownVertex):
            Scenario.build(["a"], [("e", "a", "b")])

    def test_rejects_duplicate_edge(self):
        """Test that edge ids are unique"""
        with pytest.raises(UnknownEdge):
            Scenario.build(["a", "b"], [("e", "a", "b"), ("e", "b", "a")])

    def test_loops_and_parallel_edges(self):
        """Test that loops and parallel edges are allowed"""
        s = Scenario.build(["a", "b"], [("l", "a", "a"), ("e", "a", "b"), ("f", "a", "b")])
        assert s.edge("l").is_loop
        assert s.degree("a") == 4
        assert s.betti_number() == 2

    def test_networkx_view_keeps_multiedges(self):
        """Test the multigraph export"""
        g = theta_scenario(3).to_networkx()
        assert isinstance(g, nx.MultiGraph)
        assert g.number_of_edges("u", "v") == 3

    def test_subscenario_needs_endpoints(self):
        """Test that subscenarios are closed under faces"""
        s = cycle_scenario(3)
        with pytest.raises(NotASubcomplex):
            s.subscenario(["v0"], ["e0"])


class TestComponents:
    """Test connectivity"""

    def test_components_sorted(self):
        """Test the partition of vertices"""
        s = Scenario.build(["c", "a", "b", "d"], [("e", "a", "b"), ("f", "c", "d")])
        assert connected_components(s) == [frozenset({"a", "b"}), frozenset({"c", "d"})]
        assert not is_connected(s)

    def test_isolated_vertex_is_component(self):
        """Test that isolated vertices are singleton components"""
        s = Scenario.build(["a", "b"], [])
        assert len(connected_components(s)) == 2

    def test_spanning_forest_roots(self):
        """Test one root per component"""
        s = Scenario.build(["a", "b", "c"], [("e", "a", "b")])
        forest = spanning_forest(s)
        assert [v for v, entry in forest.items() if entry is None] == ["a", "c"]


class TestWalks:
    """Test walks and circles"""

    def test_walk_endpoints(self):
        """Test endpoint derivation with reversed steps"""
        s = path_scenario(2)
        walk = Walk((Step("e1", False), Step("e0", False)))
        assert s.walk_endpoints(walk) == ("v2", "v0")

    def test_disconnected_walk(self):
        """Test that consecutive steps must meet"""
        s = path_scenario(2)
        with pytest.raises(NotComposable):
            s.walk_endpoints(Walk((Step("e0"), Step("e0"))))

    def test_canonical_form(self):
        """Test rotation to the least edge, traversed forward"""
        c = Circle.canonical([Step("e2", False), Step("e1", False), Step("e0", False)])
        assert c.steps == (Step("e0"), Step("e1"), Step("e2"))
        assert c.describe() == ["e0", "e1", "e2"]

    def test_is_circle(self):
        """Test closed walks with distinct edges"""
        s = cycle_scenario(3)
        assert s.is_circle(Walk((Step("e0"), Step("e1"), Step("e2"))))
        assert not s.is_circle(Walk((Step("e0"), Step("e1"))))


class TestCycleSpace:
    """Test fundamental circles and circle enumeration"""

    @pytest.mark.parametrize("s", [cycle_scenario(4), theta_scenario(3), theta_scenario(4), path_scenario(3)])
    def test_basis_size_is_betti_number(self, s):
        """Test |basis| = m - n + c"""
        assert len(cycle_basis(s)) == s.betti_number()

    def test_basis_circles_are_circles(self):
        """Test each basis element is a closed walk"""
        s = theta_scenario(4)
        for c in cycle_basis(s):
            assert s.is_circle(c)

    def test_loop_is_one_edge_circle(self):
        """Test loops give single-step circles"""
        s = cycle_scenario(1)
        assert cycle_basis(s) == [Circle((Step("e0"),))]

    def test_enumerate_theta(self):
        """Test all vertex-simple circles of a theta graph"""
        circles = list(enumerate_circles(theta_scenario(3), 4))
        assert [c.edge_ids() for c in circles] == [("e0", "e1"), ("e0", "e2"), ("e1", "e2")]
        assert all(theta_scenario(3).is_circle(c) for c in circles)

    def test_enumerate_respects_length(self):
        """Test the length bound"""
        assert list(enumerate_circles(cycle_scenario(5), 4)) == []
        assert len(list(enumerate_circles(cycle_scenario(5), 5))) == 1

    def test_rooted_at_first_declared_edge(self):
        """Test e2 declared before e10 roots the circle"""
        s = Scenario.build(["u", "v"], [("e2", "u", "v"), ("e10", "u", "v")])
        circles = list(enumerate_circles(s, 2))
        assert [c.describe() for c in circles] == [["e2", "e10^T"]]
        assert cycle_basis(s) == circles

    def test_eleven_cycle_in_declaration_order(self):
        """Test a long cycle keeps e0..e10 in order"""
        s = cycle_scenario(11)
        (circle,) = enumerate_circles(s, 11)
        assert circle.edge_ids() == s.edge_ids
        assert cycle_basis(s) == [circle]

    def test_signed_sum_on_reversed_step(self):
        """Test reversed steps count negatively in the circle invariant"""
        circle = Circle.canonical([Step("e0"), Step("e1", False)])
        assert circle_invariant(circle, {"e0": 1, "e1": 2}, 3) == 2


class TestCollapse:
    """Test the edge-collapsing quotient"""

    def test_collapse_merges_endpoints(self):
        """Test one fewer edge and merged endpoints"""
        cm = collapse_edge(cycle_scenario(4), "e1")
        assert cm.result.edge_ids == ("e0", "e2", "e3")
        assert cm.merged_vertex == "v1"
        assert cm.vertex_map["v2"] == "v1"
        assert cm.result.edge("e2").source == "v1"
        assert cm.edge_map["e1"] is None

    def test_parallel_edge_becomes_loop(self):
        """Test that collapsing one of two parallel edges leaves a loop"""
        cm = collapse_edge(theta_scenario(2), "e0")
        assert cm.result.edge("e1").is_loop

    def test_loop_rejected(self):
        """Test loops are not collapsed"""
        with pytest.raises(LoopCollapse):
            collapse_edge(cycle_scenario(1), "e0")

    def test_pullback_labeling(self):
        """Test labels pull back along the vertex map"""
        cm = collapse_edge(path_scenario(1), "e0")
        assert cm.pullback_labeling({"v0": 1}) == {"v0": 1, "v1": 1}


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
