"""
Tests for the fixture catalogue and the configuration layer
"""

from django.test import SimpleTestCase

from django_ising_pfaffian.conf import DEFAULTS, get_config, get_setting
from django_ising_pfaffian.exceptions import (
    CapacityError,
    GraphFileError,
    InputError,
    InvariantViolation,
    VerificationFailure,
    exit_code_for,
    http_status_for,
)
from django_ising_pfaffian.fixtures import FIXTURES, load_fixture, planar_grid, toroidal_grid
from django_ising_pfaffian.graph import perfect_matchings


class FixtureTest(SimpleTestCase):
    """Tests for the named fixtures"""

    def test_unknown_fixture(self):
        """Test that an unknown name is an input error"""
        with self.assertRaises(InputError):
            load_fixture("dodecahedron")

    def test_grid_sizes(self):
        """Test vertex and edge counts of the grids"""
        graph, _ = toroidal_grid(8)
        self.assertEqual((graph.vertex_count, graph.edge_count), (64, 128))
        graph, _ = planar_grid(4)
        self.assertEqual((graph.vertex_count, graph.edge_count), (16, 24))

    def test_toroidal_grid_needs_size_three(self):
        """Test that small toroidal grids would be multigraphs"""
        with self.assertRaises(InputError):
            toroidal_grid(2)

    def test_pinned_matching_counts(self):
        """Test the pinned perfect matching counts"""
        for name, fixture in FIXTURES.items():
            expected = fixture.expected["perfect_matchings"]
            if expected is None:
                continue
            graph, _ = fixture.build()
            self.assertEqual(sum(1 for _ in perfect_matchings(graph)), expected, name)


class ConfigTest(SimpleTestCase):
    """Tests for the settings layer"""

    def test_defaults(self):
        """Test that unset keys fall back to the defaults"""
        self.assertEqual(get_setting("spin_vertex_cap"), DEFAULTS["spin_vertex_cap"])

    def test_override(self):
        """Test that ISING_PFAFFIAN_CONFIG overrides single keys"""
        with self.settings(ISING_PFAFFIAN_CONFIG={"jobs": 3}):
            config = get_config()
        self.assertEqual(config["jobs"], 3)
        self.assertEqual(config["enumeration_cap"], DEFAULTS["enumeration_cap"])


class ErrorMappingTest(SimpleTestCase):
    """Tests for exit codes and HTTP statuses"""

    def test_exit_codes(self):
        """Test the command exit code of each error kind"""
        self.assertEqual(exit_code_for(VerificationFailure("x")), 1)
        self.assertEqual(exit_code_for(GraphFileError("x", 3)), 2)
        self.assertEqual(exit_code_for(CapacityError("x")), 3)

    def test_http_statuses(self):
        """Test the HTTP status of each error kind"""
        self.assertEqual(http_status_for(InputError("x")), 400)
        self.assertEqual(http_status_for(CapacityError("x")), 413)
        self.assertEqual(http_status_for(VerificationFailure("x")), 422)
        self.assertEqual(http_status_for(InvariantViolation("x")), 500)
