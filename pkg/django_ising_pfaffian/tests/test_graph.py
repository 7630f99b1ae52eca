"""
Tests for multigraphs, cycle bases and the brute-force oracles
"""

from fractions import Fraction
from itertools import combinations

import numpy as np
from django.test import SimpleTestCase

from django_ising_pfaffian.exceptions import CapacityError, StructuralError
from django_ising_pfaffian.fixtures import FIXTURES, k4, k5, k33, petersen, theta
from django_ising_pfaffian.graph import (
    Multigraph,
    cycle_basis,
    edge_subset,
    even_poly_oracle,
    even_subsets,
    matching_oracle,
    perfect_matchings,
    spanning_forest,
)
from django_ising_pfaffian.pfaffian import WeightAssignment

TRIANGLE = Multigraph(3, ((0, 1), (1, 2), (2, 0)))


class MultigraphTest(SimpleTestCase):
    """Tests for the Multigraph model"""

    def test_endpoint_out_of_range(self):
        """Test that an edge outside the vertex range is rejected"""
        with self.assertRaises(StructuralError):
            Multigraph(2, ((0, 2),))

    def test_loop_counts_twice_in_degree(self):
        """Test that a loop contributes two half-edges"""
        graph = Multigraph(1, ((0, 0),))
        self.assertEqual(graph.degree(0), 2)
        self.assertTrue(graph.is_loop(0))
        self.assertTrue(graph.is_even(0b1))

    def test_components_are_sorted_by_smallest_vertex(self):
        """Test component splitting and local edge ids"""
        graph = Multigraph(5, ((3, 4), (0, 1)))
        parts = graph.components
        self.assertEqual([part.vertices for part in parts], [(0, 1), (2,), (3, 4)])
        self.assertEqual([part.edges for part in parts], [(1,), (), (0,)])
        self.assertEqual(parts[2].graph.edges, ((0, 1),))
        self.assertEqual(parts[2].lift_subset(0b1), 0b1)
        self.assertEqual(parts[0].restrict_subset(0b10), 0b1)

    def test_odd_vertices(self):
        """Test the odd-degree vertex mask of a path"""
        self.assertEqual(TRIANGLE.odd_vertices(0b011), 0b101)
        self.assertEqual(TRIANGLE.odd_vertices(0b111), 0)


class CycleBasisTest(SimpleTestCase):
    """Tests for spanning forests and fundamental cycles"""

    def test_triangle(self):
        """Test that a triangle has one cycle, the whole triangle"""
        basis = cycle_basis(TRIANGLE)
        self.assertEqual(basis.rank, 1)
        self.assertEqual(basis.cycles, (0b111,))

    def test_loop_is_its_own_cycle(self):
        """Test that a loop is a fundamental cycle"""
        basis = cycle_basis(Multigraph(1, ((0, 0),)))
        self.assertEqual(basis.forest, 0)
        self.assertEqual(basis.cycles, (0b1,))

    def test_rank_is_cyclomatic_number(self):
        """Test rank m - n + c on the fixtures"""
        for name, fixture in FIXTURES.items():
            graph, _ = fixture.build()
            expected = graph.edge_count - graph.vertex_count + len(graph.components)
            self.assertEqual(cycle_basis(graph).rank, expected, name)

    def test_required_edges_are_kept(self):
        """Test that required edges end up in the forest"""
        self.assertEqual(spanning_forest(TRIANGLE, 0b110), 0b110)
        self.assertEqual(cycle_basis(TRIANGLE, 0b110).non_forest_edges, (0,))

    def test_required_cycle_is_rejected(self):
        """Test that required edges closing a cycle raise"""
        with self.assertRaises(StructuralError) as ctx:
            spanning_forest(TRIANGLE, 0b111)
        self.assertIn("cycle", str(ctx.exception))


class EvenSubsetTest(SimpleTestCase):
    """Tests for even subset enumeration"""

    def test_triangle(self):
        """Test that a triangle has the empty set and itself"""
        self.assertEqual(list(even_subsets(TRIANGLE)), [0, 0b111])

    def test_theta(self):
        """Test the four even subsets of three parallel edges"""
        graph, _ = theta()
        subsets = list(even_subsets(graph))
        self.assertEqual(subsets[0], 0)
        self.assertEqual(set(subsets), {0, 0b011, 0b101, 0b110})

    def test_matches_brute_force(self):
        """Test enumeration against filtering all subsets"""
        for name, fixture in FIXTURES.items():
            graph, _ = fixture.build()
            if graph.edge_count > 15:
                continue
            expected = {s for s in range(1 << graph.edge_count) if graph.is_even(s)}
            found = list(even_subsets(graph))
            self.assertEqual(len(found), len(set(found)), name)
            self.assertEqual(set(found), expected, name)

    def test_closed_under_symmetric_difference(self):
        """Test that sums of even subsets are even"""
        graph, _ = k5()
        subsets = list(even_subsets(graph))
        rng = np.random.default_rng(3)
        for _ in range(50):
            a, b = rng.choice(len(subsets), size=2)
            self.assertTrue(graph.is_even(subsets[a] ^ subsets[b]))

    def test_cap(self):
        """Test that the cap is checked before enumerating"""
        graph, _ = k5()
        with self.assertRaises(CapacityError) as ctx:
            even_subsets(graph, cap=32)
        self.assertEqual(ctx.exception.required, 64)
        self.assertEqual(ctx.exception.cap, 32)


class OracleTest(SimpleTestCase):
    """Tests for the brute-force polynomials"""

    def test_edgeless_graph(self):
        """Test that a graph without edges has even polynomial 1"""
        self.assertEqual(even_poly_oracle(Multigraph(3), WeightAssignment(())), 1)

    def test_loop(self):
        """Test 1 + w for a single loop"""
        weights = WeightAssignment((Fraction(3, 7),))
        self.assertEqual(
            even_poly_oracle(Multigraph(1, ((0, 0),)), weights), Fraction(10, 7)
        )

    def test_k5_all_ones(self):
        """Test that K5 has 64 even subsets"""
        graph, _ = k5()
        self.assertEqual(even_poly_oracle(graph, WeightAssignment.ones(10)), 64)

    def test_float_weights(self):
        """Test the float path of the oracle"""
        weights = WeightAssignment((0.5, 2.0, 4.0), "float")
        self.assertAlmostEqual(even_poly_oracle(TRIANGLE, weights), 5.0)

    def test_matching_counts(self):
        """Test perfect matching counts on small graphs"""
        self.assertEqual(matching_oracle(Multigraph(2, ((0, 1),)), WeightAssignment((5,))), 5)
        for build, count in ((k4, 3), (k33, 6), (petersen, 6), (theta, 3)):
            graph, _ = build()
            self.assertEqual(
                matching_oracle(graph, WeightAssignment.ones(graph.edge_count)), count
            )

    def test_odd_vertex_count_has_no_matching(self):
        """Test that graphs with an odd number of vertices give zero"""
        graph, _ = k5()
        self.assertEqual(list(perfect_matchings(graph)), [])
        self.assertEqual(matching_oracle(graph, WeightAssignment.ones(10)), 0)

    def test_loops_never_match(self):
        """Test that a loop is skipped by the matching search"""
        graph = Multigraph(2, ((0, 0), (0, 1)))
        self.assertEqual(list(perfect_matchings(graph)), [(1,)])

    def test_matchings_agree_with_subset_search(self):
        """Test matchings against all edge subsets of the right size"""
        for build in (k33, petersen):
            graph, _ = build()
            half = graph.vertex_count // 2
            expected = {
                chosen
                for chosen in combinations(range(graph.edge_count), half)
                if len({v for e in chosen for v in graph.edges[e]}) == graph.vertex_count
            }
            self.assertEqual(set(perfect_matchings(graph)), expected)

    def test_matching_cap(self):
        """Test that the matching cap is enforced"""
        graph, _ = k4()
        with self.assertRaises(CapacityError):
            list(perfect_matchings(graph, cap=2))

    def test_edge_subset_helper(self):
        """Test building a subset from edge ids"""
        self.assertEqual(edge_subset([0, 2]), 0b101)
