"""
Named example embeddings with pinned combinatorial data.

``FIXTURES`` maps a name to a :class:`Fixture`; ``expected`` values of
``None`` are not pinned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from typing import Callable

from .exceptions import InputError
from .graph import Multigraph
from .graphfile import parse_graph_file
from .surface import RotationSystem


def loop() -> tuple[Multigraph, RotationSystem]:
    return Multigraph(1, ((0, 0),)), RotationSystem(((0, 1),))


def theta(toroidal: bool = False) -> tuple[Multigraph, RotationSystem]:
    graph = Multigraph(2, ((0, 1), (0, 1), (0, 1)))
    second = (1, 3, 5) if toroidal else (5, 3, 1)
    return graph, RotationSystem(((0, 2, 4), second))


def k4() -> tuple[Multigraph, RotationSystem]:
    graph = Multigraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
    rotation = RotationSystem(((0, 4, 2), (6, 8, 1), (3, 10, 7), (5, 9, 11)))
    return graph, rotation


def k5() -> tuple[Multigraph, RotationSystem]:
    graph = Multigraph(5, tuple(combinations(range(5), 2)))
    orders = [[(i + step) % 5 for step in (1, 2, 4, 3)] for i in range(5)]
    return graph, RotationSystem.from_neighbor_orders(graph, orders)


def k33() -> tuple[Multigraph, RotationSystem]:
    graph = Multigraph(6, tuple((i, 3 + j) for i in range(3) for j in range(3)))
    orders = [[3 + (i + k) % 3 for k in range(3)] for i in range(3)]
    orders += [[(j + k) % 3 for k in range(3)] for j in range(3)]
    return graph, RotationSystem.from_neighbor_orders(graph, orders)


def petersen() -> tuple[Multigraph, RotationSystem]:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, 5 + i) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    graph = Multigraph(10, tuple(edges))
    orders = [[(i + 1) % 5, 5 + i, (i - 1) % 5] for i in range(5)]
    orders += [[i, 5 + (i + 2) % 5, 5 + (i - 2) % 5] for i in range(5)]
    return graph, RotationSystem.from_neighbor_orders(graph, orders)


def toroidal_grid(size: int) -> tuple[Multigraph, RotationSystem]:
    """``size x size`` grid with wrap-around; edges ``2v`` east, ``2v + 1`` north."""
    if size < 3:
        raise InputError("toroidal grids need size at least 3")

    def vertex(row, col):
        return (row % size) * size + col % size

    edges = []
    orders = []
    for row in range(size):
        for col in range(size):
            edges.append((vertex(row, col), vertex(row, col + 1)))
            edges.append((vertex(row, col), vertex(row + 1, col)))
            orders.append(
                [
                    vertex(row, col + 1),
                    vertex(row + 1, col),
                    vertex(row, col - 1),
                    vertex(row - 1, col),
                ]
            )
    graph = Multigraph(size * size, tuple(edges))
    return graph, RotationSystem.from_neighbor_orders(graph, orders)


def planar_grid(size: int) -> tuple[Multigraph, RotationSystem]:
    def vertex(row, col):
        return row * size + col

    def inside(row, col):
        return 0 <= row < size and 0 <= col < size

    edges = []
    orders = []
    for row in range(size):
        for col in range(size):
            if col + 1 < size:
                edges.append((vertex(row, col), vertex(row, col + 1)))
            if row + 1 < size:
                edges.append((vertex(row, col), vertex(row + 1, col)))
            around = [(row, col + 1), (row + 1, col), (row, col - 1), (row - 1, col)]
            orders.append([vertex(r, c) for r, c in around if inside(r, c)])
    graph = Multigraph(size * size, tuple(edges))
    return graph, RotationSystem.from_neighbor_orders(graph, orders)


@dataclass(frozen=True)
class Fixture:
    name: str
    build: Callable[[], tuple[Multigraph, RotationSystem]]
    expected: dict = field(default_factory=dict)
    description: str = ""


def _pins(genus, faces, even, matchings, components=1):
    return {
        "genus": genus,
        "faces": faces,
        "components": components,
        "even_subsets": even,
        "perfect_matchings": matchings,
    }


FIXTURES = {
    fixture.name: fixture
    for fixture in (
        Fixture("loop", loop, _pins(0, 2, 2, 0), "one vertex with a loop"),
        Fixture("theta", theta, _pins(0, 3, 4, 3), "three parallel edges, planar"),
        Fixture(
            "theta_torus",
            lambda: theta(toroidal=True),
            _pins(1, 1, 4, 3),
            "three parallel edges on the torus",
        ),
        Fixture("k4", k4, _pins(0, 4, 8, 3), "complete graph K4, planar"),
        Fixture("k5", k5, _pins(1, 5, 64, 0), "complete graph K5 on the torus"),
        Fixture("k33", k33, _pins(1, 3, 16, 6), "complete bipartite K3,3 on the torus"),
        Fixture("petersen", petersen, _pins(2, 3, 64, 6), "Petersen graph, genus 2"),
        Fixture("grid2", lambda: planar_grid(2), _pins(0, 2, 2, 2), "2x2 planar grid"),
        Fixture("grid3", lambda: planar_grid(3), _pins(0, 5, 16, 0), "3x3 planar grid"),
        Fixture("grid4", lambda: planar_grid(4), _pins(0, 10, 512, 36), "4x4 planar grid"),
        Fixture(
            "torus3", lambda: toroidal_grid(3), _pins(1, 9, 1024, 0), "3x3 toroidal grid"
        ),
        Fixture(
            "torus4",
            lambda: toroidal_grid(4),
            _pins(1, 16, 131072, None),
            "4x4 toroidal grid",
        ),
        Fixture(
            "torus8",
            lambda: toroidal_grid(8),
            _pins(1, 64, None, None),
            "8x8 toroidal grid",
        ),
    )
}

BUNDLED = ("loop", "theta", "theta_torus", "k4", "k5", "k33")


def load_fixture(name: str) -> tuple[Multigraph, RotationSystem]:
    try:
        return FIXTURES[name].build()
    except KeyError:
        raise InputError(
            f"unknown fixture {name!r}, choose from {sorted(FIXTURES)}"
        ) from None


def bundled_fixture_text(name: str) -> str:
    """Text of a graph file shipped in the package ``graphs`` directory."""
    return (
        resources.files("django_ising_pfaffian")
        .joinpath("graphs", f"{name}.graph")
        .read_text(encoding="utf-8")
    )


def load_bundled_fixture(name: str) -> tuple[Multigraph, RotationSystem | None]:
    return parse_graph_file(bundled_fixture_text(name))
