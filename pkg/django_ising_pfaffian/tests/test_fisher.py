"""
Tests for the Fisher blow-up and the even-subset to matching extension
"""

from django.test import SimpleTestCase

from django_ising_pfaffian.exceptions import StructuralError
from django_ising_pfaffian.fisher import (
    attachment,
    blow_up,
    blowup_rotation,
    derive_sigma,
    extend_even_to_matching,
    gadget_completions,
    gadget_planar_rotation_and_kasteleyn,
    local_edges,
    restrict_matching,
    with_rotation,
)
from django_ising_pfaffian.fixtures import FIXTURES, k4, k5, loop, petersen, theta
from django_ising_pfaffian.gf2 import popcount
from django_ising_pfaffian.graph import Multigraph, even_subsets, perfect_matchings
from django_ising_pfaffian.surface import RotationSystem, trace_faces

SINGLE_EDGE = Multigraph(2, ((0, 1),))
TRIANGLE = Multigraph(3, ((0, 1), (1, 2), (2, 0)))
TRIANGLE_ROTATION = RotationSystem(((0, 5), (1, 2), (3, 4)))

# fixtures whose blow-ups have few enough perfect matchings to search
MATCHABLE = [
    name
    for name, fixture in FIXTURES.items()
    if fixture.expected.get("even_subsets") is not None
    and fixture.expected["even_subsets"] <= 1 << 9
]


def is_perfect_matching(graph, matching):
    covered = [v for edge in matching for v in graph.edges[edge]]
    return sorted(covered) == list(range(graph.vertex_count))


def gadget_without(degree, covered):
    """The bare gadget with the covered attachment vertices removed."""
    removed = {attachment(t) for t in range(degree) if covered >> t & 1}
    kept = [v for v in range(6 * degree) if v not in removed]
    index = {v: i for i, v in enumerate(kept)}
    edges = tuple(
        (index[u], index[v])
        for u, v in local_edges(degree)
        if u in index and v in index
    )
    return Multigraph(len(kept), edges)


class SigmaTest(SimpleTestCase):
    """Tests for cutting cyclic orders into linear ones"""

    def test_cut_at_smallest_half(self):
        """Test that each order starts at its smallest half-edge"""
        self.assertEqual(derive_sigma(RotationSystem(((3, 1, 2),))), ((1, 2, 3),))
        self.assertEqual(derive_sigma(RotationSystem(((1, 0),))), ((0, 1),))
        self.assertEqual(derive_sigma(RotationSystem(((),))), ((),))


class BlowUpTest(SimpleTestCase):
    """Tests for the blown-up graph"""

    def test_single_edge(self):
        """Test sizes for one edge between two degree-one vertices"""
        blowup = blow_up(SINGLE_EDGE, ((0,), (1,)))
        self.assertEqual(blowup.graph.vertex_count, 12)
        self.assertEqual(blowup.graph.edge_count, 1 + 2 * 7)
        self.assertEqual(blowup.graph.edges[0], (1, 7))

    def test_loop(self):
        """Test that a loop joins two attachments of one gadget"""
        graph, rotation = loop()
        blowup = blow_up(graph, derive_sigma(rotation))
        self.assertEqual(blowup.graph.vertex_count, 12)
        self.assertEqual(blowup.graph.edges[0], (1, 7))

    def test_vertex_count_is_twelve_per_edge(self):
        """Test that every original edge adds twelve vertices"""
        for build in (loop, theta, k4, k5, petersen):
            graph, rotation = build()
            blowup = blow_up(graph, derive_sigma(rotation))
            self.assertEqual(blowup.graph.vertex_count, 12 * graph.edge_count)

    def test_result_is_simple(self):
        """Test that the blow-up has no loops and no parallel edges"""
        for build in (loop, theta, k5):
            graph, rotation = build()
            edges = blow_up(graph, derive_sigma(rotation)).graph.edges
            self.assertTrue(all(u != v for u, v in edges))
            pairs = [tuple(sorted(edge)) for edge in edges]
            self.assertEqual(len(pairs), len(set(pairs)))

    def test_bad_sigma(self):
        """Test that sigma must list the incident halves"""
        with self.assertRaises(StructuralError):
            blow_up(SINGLE_EDGE, ((0,), (0,)))

    def test_genus_is_preserved(self):
        """Test that the embedded blow-up keeps the genus of every fixture"""
        for name, fixture in FIXTURES.items():
            graph, rotation = fixture.build()
            blowup = with_rotation(graph, rotation)
            self.assertEqual(
                trace_faces(blowup.graph, blowup.rotation).genus,
                fixture.expected["genus"],
                name,
            )

    def test_rotation_must_match_sigma(self):
        """Test that a different rotation is rejected"""
        graph, rotation = k4()
        blowup = blow_up(graph, derive_sigma(rotation))
        orders = list(rotation.orders)
        first = orders[0]
        orders[0] = (first[0], first[2], first[1])
        with self.assertRaises(StructuralError):
            blowup_rotation(graph, RotationSystem(tuple(orders)), blowup)

    def test_delta_only_touches_gadgets(self):
        """Test that original edges start unflipped"""
        graph, rotation = k5()
        blowup = with_rotation(graph, rotation)
        self.assertEqual(blowup.delta & graph.full_subset, 0)
        self.assertEqual(blowup.gadget_edges & graph.full_subset, 0)


class GadgetTest(SimpleTestCase):
    """Tests for the planar gadget and its orientation"""

    def test_degree_one_faces(self):
        """Test the two triangles of the smallest gadget"""
        layout = gadget_planar_rotation_and_kasteleyn(1)
        self.assertEqual(len(layout.interior_faces), 2)
        for face in layout.interior_faces:
            self.assertEqual(len(face), 3)
        vertex_sets = sorted(
            sorted({layout.graph.half_vertex(h) for h in face})
            for face in layout.interior_faces
        )
        self.assertEqual(vertex_sets, [[0, 1, 2], [3, 4, 5]])

    def test_layouts_are_planar(self):
        """Test that closed-up gadgets are spheres with 2d triangles"""
        for degree in range(1, 7):
            layout = gadget_planar_rotation_and_kasteleyn(degree)
            self.assertEqual(trace_faces(layout.graph, layout.rotation).genus, 0)
            self.assertEqual(len(layout.interior_faces), 2 * degree)

    def test_local_edge_count(self):
        """Test 6d - 1 path edges plus 2d chords"""
        for degree in range(1, 5):
            self.assertEqual(len(local_edges(degree)), 8 * degree - 1)

    def test_completion_law(self):
        """Test one completion for even covers and none for odd ones"""
        for degree in range(1, 7):
            for covered in range(1 << degree):
                total, witness = gadget_completions(degree, covered)
                expected = 1 if popcount(covered) % 2 == 0 else 0
                self.assertEqual(total, expected, (degree, covered))
                self.assertEqual(bool(witness), bool(expected))

    def test_completion_law_against_matching_search(self):
        """Test the scan against a plain matching search"""
        for degree in range(1, 5):
            for covered in range(1 << degree):
                graph = gadget_without(degree, covered)
                count = sum(1 for _ in perfect_matchings(graph))
                self.assertEqual(count, gadget_completions(degree, covered)[0])


class ExtensionTest(SimpleTestCase):
    """Tests for extending even subsets to perfect matchings"""

    def test_empty_subset_of_a_loop(self):
        """Test that the empty set extends inside the gadget"""
        graph, rotation = loop()
        blowup = with_rotation(graph, rotation)
        matching = extend_even_to_matching(blowup, 0)
        self.assertTrue(is_perfect_matching(blowup.graph, matching))
        self.assertNotIn(0, matching)

    def test_triangle(self):
        """Test that the whole triangle extends"""
        blowup = with_rotation(TRIANGLE, TRIANGLE_ROTATION)
        matching = extend_even_to_matching(blowup, 0b111)
        self.assertTrue(is_perfect_matching(blowup.graph, matching))
        self.assertEqual(restrict_matching(blowup, matching), 0b111)

    def test_odd_subset_names_vertex(self):
        """Test that an odd subset is rejected"""
        blowup = with_rotation(TRIANGLE, TRIANGLE_ROTATION)
        with self.assertRaises(StructuralError) as ctx:
            extend_even_to_matching(blowup, 0b001)
        self.assertIn("vertex", str(ctx.exception))

    def test_bijection_with_even_subsets(self):
        """Test that matchings of the blow-up are the extended even subsets"""
        for name in MATCHABLE:
            graph, rotation = FIXTURES[name].build()
            blowup = with_rotation(graph, rotation)
            extended = {
                extend_even_to_matching(blowup, subset) for subset in even_subsets(graph)
            }
            found = set(perfect_matchings(blowup.graph))
            self.assertEqual(found, extended, name)
            self.assertEqual(len(found), FIXTURES[name].expected["even_subsets"], name)
            for matching in found:
                self.assertTrue(graph.is_even(restrict_matching(blowup, matching)))

    def test_extension_is_injective(self):
        """Test that distinct even subsets extend differently"""
        graph, rotation = k5()
        blowup = with_rotation(graph, rotation)
        for subset in even_subsets(graph):
            matching = extend_even_to_matching(blowup, subset)
            self.assertTrue(is_perfect_matching(blowup.graph, matching))
            self.assertEqual(restrict_matching(blowup, matching), subset)
