"""
Tests for circle invariants, null-homotopy, counting and faces
"""
import itertools
from fractions import Fraction

import pytest

from ctxlab.contextuality import is_polytope_vertex, is_strongly_contextual
from ctxlab.errors import NonPrimeD, NotConnected, NotInvariant, NullHomotopicInput
from ctxlab.homotopy import (
    all_labelings,
    circle_invariant,
    count_non_null_homotopic,
    count_null_homotopic,
    face_member,
    face_structure,
    is_null_homotopic,
    labeling_of_differences,
    unique_sc_vertex,
)
from ctxlab.scenario import Scenario, Walk, cycle_basis, cycle_scenario, enumerate_circles, theta_scenario
from ctxlab.semiring import Dist, delta, uniform
from ctxlab.simpdist import edge_differences, is_deterministic, section_T_of_labeling

from builders import chsh_box

COUNT_CASES = [
    (2, 2, Scenario.build(["a", "b"], [("e0", "a", "b"), ("e1", "a", "b")])),
    (3, 3, cycle_scenario(3)),
    (3, 4, Scenario.build(["a", "b", "c"], [("e0", "a", "b"), ("e1", "b", "c"), ("e2", "c", "a"), ("e3", "a", "a")])),
    (4, 4, cycle_scenario(4)),
]

LOOPED_TRIANGLE = Scenario.build(
    ["a", "b", "c"],
    [("e0", "a", "b"), ("e1", "b", "c"), ("e2", "c", "a"), ("e3", "a", "b"), ("e4", "c", "c")],
)
FACE_SCENARIOS = [cycle_scenario(3), theta_scenario(3), LOOPED_TRIANGLE]


class TestNullHomotopy:
    """Test the null-homotopy criterion"""

    def test_zero_labeling(self, square):
        """Test the zero labeling is null-homotopic with zero potential"""
        result = is_null_homotopic(square, {e: 0 for e in square.edge_ids}, 2)
        assert result
        assert set(result.potential.values()) == {0}

    def test_single_one_on_square(self, square):
        """Test a single odd edge obstructs"""
        result = is_null_homotopic(square, {"e0": 1, "e1": 0, "e2": 0, "e3": 0}, 2)
        assert not result
        assert circle_invariant(result.obstruction, {"e0": 1, "e1": 0, "e2": 0, "e3": 0}, 2) == 1

    def test_potential_witness(self):
        """Test ψ(target) - ψ(source) = φ(e) on every edge"""
        s = theta_scenario(3)
        labels = {"e0": 2, "e1": 2, "e2": 2}
        result = is_null_homotopic(s, labels, 3)
        assert result
        psi = result.potential
        assert all((psi[e.target] - psi[e.source]) % 3 == labels[e.id] for e in s.edges)

    def test_balanced_sum_on_reversed_edges(self):
        """Test equal labels on parallel edges cancel around the circle"""
        s = theta_scenario(2)
        assert is_null_homotopic(s, {"e0": 1, "e1": 1}, 4)
        assert not is_null_homotopic(s, {"e0": 1, "e1": 3}, 4)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_same_verdict_for_every_spanning_order(self, d):
        """Test the basis from each vertex order gives the same verdict"""
        s = LOOPED_TRIANGLE
        bases = [cycle_basis(s, list(order)) for order in itertools.permutations(s.vertices)]
        assert all(len(basis) == s.betti_number() for basis in bases)
        for labels in all_labelings(s, d):
            verdict = bool(is_null_homotopic(s, labels, d))
            for basis in bases:
                assert all(circle_invariant(c, labels, d) == 0 for c in basis) == verdict


class TestCircleInvariant:
    """Test the signed sum around circles"""

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_reversal_negates(self, d):
        """Test walking a circle backwards negates its invariant"""
        s = LOOPED_TRIANGLE
        circles = list(enumerate_circles(s, 5))
        for labels in all_labelings(s, d):
            for c in circles:
                assert (circle_invariant(c.reversed(), labels, d) + circle_invariant(c, labels, d)) % d == 0

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_concatenation_adds(self, d):
        """Test the invariant of two circles through u is the sum of theirs"""
        s = theta_scenario(3)
        circles = list(enumerate_circles(s, 3))
        assert len(circles) == 3
        for labels in all_labelings(s, d):
            for first, second in itertools.product(circles, repeat=2):
                joined = Walk(first.steps + second.steps)
                assert s.walk_endpoints(joined) == ("u", "u")
                expected = (circle_invariant(first, labels, d) + circle_invariant(second, labels, d)) % d
                assert circle_invariant(joined, labels, d) == expected


class TestCounting:
    """Test the labeling counts"""

    @pytest.mark.parametrize("n,m,s", COUNT_CASES)
    @pytest.mark.parametrize("d", [2, 3])
    def test_counts_match_enumeration(self, n, m, s, d):
        """Test d^m - d^(n-1) non-null-homotopic and d^(n-1) null-homotopic labelings"""
        assert (len(s.vertices), len(s.edges)) == (n, m)
        null = sum(1 for labels in all_labelings(s, d) if is_null_homotopic(s, labels, d))
        assert null == count_null_homotopic(s, d) == d ** (n - 1)
        assert d ** m - null == count_non_null_homotopic(s, d) == d ** m - d ** (n - 1)

    @pytest.mark.parametrize("n,m,s", COUNT_CASES)
    @pytest.mark.parametrize("d", [2, 3])
    def test_non_null_homotopic_images_are_sc_vertices(self, n, m, s, d):
        """Test each non-null-homotopic T-section image is a strongly contextual vertex"""
        found = 0
        for labels in all_labelings(s, d):
            if is_null_homotopic(s, labels, d):
                continue
            p = section_T_of_labeling(s, labels, d)
            assert is_strongly_contextual(p).strongly_contextual
            assert is_polytope_vertex(p)
            found += 1
        assert found >= d ** m - d ** (n - 1)

    def test_disconnected_refused(self):
        """Test counting needs a connected scenario"""
        s = Scenario.build(["a", "b"], [])
        with pytest.raises(NotConnected):
            count_null_homotopic(s, 2)


class TestFaces:
    """Test face structure and face members"""

    @pytest.mark.parametrize("s", [cycle_scenario(4), theta_scenario(3)])
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_dimension_and_members(self, s, d):
        """Test dim = |ℤ_d/H| - 1 and d₀-pushforward of every member is δ^φ"""
        for labels in all_labelings(s, d):
            fs = face_structure(s, labels, d)
            assert fs.dimension == d // len(fs.subgroup) - 1
            for orbit in fs.orbits:
                p_v = uniform(sorted(orbit))
                member = face_member(fs, s.vertices[0], p_v)
                assert edge_differences(member) == {e: delta(labels[e]) for e in s.edge_ids}
                assert member.vertex_distribution(s.vertices[0]) == p_v

    @pytest.mark.parametrize("s", FACE_SCENARIOS)
    @pytest.mark.parametrize("d", [2, 3])
    def test_member_independent_of_base_vertex(self, s, d):
        """Test rebuilding a member from any other vertex gives it back"""
        for labels in all_labelings(s, d):
            fs = face_structure(s, labels, d)
            for orbit in fs.orbits:
                member = face_member(fs, s.vertices[0], uniform(sorted(orbit)))
                for v in s.vertices[1:]:
                    assert face_member(fs, v, member.vertex_distribution(v)) == member

    @pytest.mark.parametrize("s", FACE_SCENARIOS)
    @pytest.mark.parametrize("d", [2, 3])
    def test_deterministic_members_are_null_homotopic_vertices(self, s, d):
        """Test the d^n deterministic distributions are the vertices of null-homotopic faces"""
        found = set()
        for labels in all_labelings(s, d):
            fs = face_structure(s, labels, d)
            null = bool(is_null_homotopic(s, labels, d))
            assert (fs.subgroup == frozenset({0})) == null
            for orbit in fs.orbits:
                outcome = is_deterministic(face_member(fs, s.vertices[0], uniform(sorted(orbit))))
                assert (outcome is not None) == null
                if outcome is not None:
                    found.add(outcome)
        assert len(found) == d ** len(s.vertices)

    @pytest.mark.parametrize("s", [cycle_scenario(4), theta_scenario(3)])
    @pytest.mark.parametrize("d", [2, 3])
    def test_unique_vertex_for_prime_d(self, s, d):
        """Test non-null-homotopic faces are singletons holding an SC vertex"""
        for labels in all_labelings(s, d):
            if is_null_homotopic(s, labels, d):
                continue
            fs = face_structure(s, labels, d)
            assert fs.dimension == 0
            p = unique_sc_vertex(s, labels, d)
            assert is_strongly_contextual(p).strongly_contextual
            assert is_polytope_vertex(p)

    def test_square_single_one_is_pr_box(self, square):
        """Test the face of (1,0,0,0) on the square is the PR box"""
        p = unique_sc_vertex(square, {"e0": 1, "e1": 0, "e2": 0, "e3": 0}, 2)
        assert p == chsh_box()

    def test_zero_labeling_dimension(self, square):
        """Test the zero labeling face has dimension d - 1"""
        assert face_structure(square, {e: 0 for e in square.edge_ids}, 2).dimension == 1

    def test_d4_loop_labeled_two(self):
        """Test H = {0, 2} on a d = 4 loop"""
        s = cycle_scenario(1)
        fs = face_structure(s, {"e0": 2}, 4)
        assert sorted(fs.subgroup) == [0, 2]
        assert fs.dimension == 1

    def test_non_invariant_refused(self):
        """Test p_v must be constant on H-orbits"""
        s = cycle_scenario(1)
        fs = face_structure(s, {"e0": 2}, 4)
        with pytest.raises(NotInvariant):
            face_member(fs, "v0", delta(0))
        member = face_member(fs, "v0", Dist.from_weights({0: Fraction(1, 2), 2: Fraction(1, 2)}))
        assert member.matrix("e0")[(0, 2)] == Fraction(1, 2)

    def test_unique_vertex_preconditions(self, square):
        """Test prime d and non-null-homotopic input are required"""
        with pytest.raises(NonPrimeD):
            unique_sc_vertex(square, {"e0": 1, "e1": 0, "e2": 0, "e3": 0}, 4)
        with pytest.raises(NullHomotopicInput):
            unique_sc_vertex(square, {e: 0 for e in square.edge_ids}, 2)


class TestDifferences:
    """Test the labeling read off D(d₀)∘p"""

    def test_pr_box_labels(self, chsh):
        """Test the PR box has deterministic differences with odd invariant"""
        labels = labeling_of_differences(chsh)
        assert labels == {"e0": 1, "e1": 0, "e2": 0, "e3": 0}
        assert circle_invariant(cycle_basis(chsh.scenario)[0], labels, 2) == 1

    def test_mixture_has_no_labels(self, two_deterministic_mix):
        """Test non-deterministic differences give None"""
        assert labeling_of_differences(two_deterministic_mix) is None


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
