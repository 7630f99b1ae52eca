"""
Multigraphs with half-edge structure, cycle-space algebra over GF(2) and the
brute-force oracles for even subgraphs and perfect matchings.

Edge ``e = (u, v)`` owns two half-edges: ``2e`` (side A, at ``u``) and
``2e + 1`` (side B, at ``v``). A loop has both halves at the same vertex.
Edge subsets are bitmasks over edge ids (see :mod:`.gf2`).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import TYPE_CHECKING, Iterator

import networkx as nx
from networkx.utils import UnionFind

from .conf import get_setting
from .exceptions import CapacityError, StructuralError
from .gf2 import iter_bits, lowest_bit

if TYPE_CHECKING:
    from .pfaffian import WeightAssignment

logger = logging.getLogger(__name__)

EdgeSubset = int


def half_edge(edge: int, side: int) -> int:
    return 2 * edge + side


def half_token(half: int) -> str:
    return f"{half >> 1}{'ab'[half & 1]}"


def edge_subset(edge_ids) -> EdgeSubset:
    subset = 0
    for edge in edge_ids:
        subset |= 1 << edge
    return subset


@dataclass(frozen=True)
class Multigraph:
    """
    Undirected multigraph on vertices ``0..vertex_count-1``.

    ``edges[e] = (u, v)`` puts half-edge A of ``e`` at ``u`` and half-edge B
    at ``v``. Loops (``u == v``) and parallel edges are allowed.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise StructuralError("vertex count must be nonnegative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for edge, (u, v) in enumerate(edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise StructuralError(
                    f"edge {edge} has an endpoint outside 0..{self.vertex_count - 1}"
                )
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def full_subset(self) -> EdgeSubset:
        return (1 << len(self.edges)) - 1

    def half_vertex(self, half: int) -> int:
        return self.edges[half >> 1][half & 1]

    def is_loop(self, edge: int) -> bool:
        u, v = self.edges[edge]
        return u == v

    @cached_property
    def incident_halves(self) -> tuple[tuple[int, ...], ...]:
        halves = [[] for _ in range(self.vertex_count)]
        for edge, (u, v) in enumerate(self.edges):
            halves[u].append(half_edge(edge, 0))
            halves[v].append(half_edge(edge, 1))
        return tuple(tuple(h) for h in halves)

    def degree(self, vertex: int) -> int:
        return len(self.incident_halves[vertex])

    def odd_vertices(self, subset: EdgeSubset) -> int:
        """Bitmask of vertices with odd degree in ``subset`` (loops count twice)."""
        odd = 0
        for edge in iter_bits(subset):
            u, v = self.edges[edge]
            odd ^= (1 << u) ^ (1 << v)
        return odd

    def is_even(self, subset: EdgeSubset) -> bool:
        return self.odd_vertices(subset) == 0

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        for edge, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, key=edge)
        return graph

    @cached_property
    def components(self) -> tuple["Component", ...]:
        parts = sorted(
            (sorted(part) for part in nx.connected_components(self.to_networkx())),
            key=lambda part: part[0],
        )
        result = []
        for vertices in parts:
            local = {vertex: index for index, vertex in enumerate(vertices)}
            edge_ids = tuple(
                edge
                for edge, (u, _) in enumerate(self.edges)
                if u in local
            )
            sub = Multigraph(
                len(vertices),
                tuple((local[self.edges[e][0]], local[self.edges[e][1]]) for e in edge_ids),
            )
            result.append(Component(sub, tuple(vertices), edge_ids))
        return tuple(result)

    def is_connected(self) -> bool:
        return len(self.components) <= 1


@dataclass(frozen=True)
class Component:
    """A connected component re-indexed to local vertex and edge ids."""

    graph: Multigraph
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def restrict_subset(self, subset: EdgeSubset) -> EdgeSubset:
        return edge_subset(
            local for local, edge in enumerate(self.edges) if subset >> edge & 1
        )

    def lift_subset(self, subset: EdgeSubset) -> EdgeSubset:
        return edge_subset(self.edges[local] for local in iter_bits(subset))


@dataclass(frozen=True)
class CycleBasis:
    """Spanning forest plus one fundamental cycle per non-forest edge."""

    forest: EdgeSubset
    non_forest_edges: tuple[int, ...]
    cycles: tuple[EdgeSubset, ...]

    @property
    def rank(self) -> int:
        return len(self.cycles)


def spanning_forest(graph: Multigraph, required_edges: EdgeSubset = 0) -> EdgeSubset:
    """
    Kruskal-style spanning forest that contains ``required_edges``.

    Required edges are inserted first, remaining edges in id order, so the
    forest is deterministic. Raises :class:`StructuralError` listing the
    required edges that close a cycle.
    """
    components = UnionFind(range(graph.vertex_count))
    forest = 0
    offending = []
    for edge in iter_bits(required_edges):
        u, v = graph.edges[edge]
        if components[u] == components[v]:
            offending.append(edge)
            continue
        components.union(u, v)
        forest |= 1 << edge
    if offending:
        raise StructuralError(f"required edges contain a cycle: {offending}")

    for edge, (u, v) in enumerate(graph.edges):
        if forest >> edge & 1 or u == v:
            continue
        if components[u] != components[v]:
            components.union(u, v)
            forest |= 1 << edge
    return forest


def root_paths(graph: Multigraph, forest: EdgeSubset) -> list[EdgeSubset]:
    """For each vertex, the forest edges on its path to its component root."""
    adjacency = [[] for _ in range(graph.vertex_count)]
    for edge in iter_bits(forest):
        u, v = graph.edges[edge]
        adjacency[u].append((v, edge))
        adjacency[v].append((u, edge))

    paths = [None] * graph.vertex_count
    for root in range(graph.vertex_count):
        if paths[root] is not None:
            continue
        paths[root] = 0
        stack = [root]
        while stack:
            vertex = stack.pop()
            for neighbour, edge in adjacency[vertex]:
                if paths[neighbour] is None:
                    paths[neighbour] = paths[vertex] ^ (1 << edge)
                    stack.append(neighbour)
    return paths


def cycle_basis(graph: Multigraph, required_edges: EdgeSubset = 0) -> CycleBasis:
    forest = spanning_forest(graph, required_edges)
    paths = root_paths(graph, forest)
    non_forest = tuple(e for e in range(graph.edge_count) if not forest >> e & 1)
    cycles = tuple(
        (1 << e) ^ paths[graph.edges[e][0]] ^ paths[graph.edges[e][1]]
        for e in non_forest
    )
    expected = graph.edge_count - graph.vertex_count + len(graph.components)
    if len(cycles) != expected:
        raise StructuralError(
            f"cycle basis has rank {len(cycles)}, expected m - n + c = {expected}"
        )
    return CycleBasis(forest, non_forest, cycles)


def _gray_combinations(vectors: tuple[int, ...]) -> Iterator[int]:
    current = 0
    yield current
    for index in range(1, 1 << len(vectors)):
        current ^= vectors[lowest_bit(index)]
        yield current


def even_subsets(graph: Multigraph, cap: int | None = None) -> Iterator[EdgeSubset]:
    """
    Stream every even edge subset exactly once, starting with the empty set.

    Subsets are F2-combinations of the cycle basis visited in Gray-code order.
    """
    cap = get_setting("enumeration_cap") if cap is None else cap
    basis = cycle_basis(graph)
    count = 1 << basis.rank
    if count > cap:
        raise CapacityError(
            f"graph has 2^{basis.rank} = {count} even subsets, cap is {cap}",
            required=count,
            cap=cap,
        )
    return _gray_combinations(basis.cycles)


def even_poly_oracle(
    graph: Multigraph, weights: "WeightAssignment", cap: int | None = None
):
    """Sum over even subsets of the product of their edge weights."""
    subsets = even_subsets(graph, cap)
    if not weights.is_exact:
        return sum(
            prod(weights[e] for e in iter_bits(subset)) for subset in subsets
        )

    # Clear denominators once: the sum becomes an integer over prod(q_e).
    numerators = [w.numerator for w in weights.values]
    denominators = [w.denominator for w in weights.values]
    total = 0
    for subset in subsets:
        term = 1
        for edge in range(graph.edge_count):
            term *= numerators[edge] if subset >> edge & 1 else denominators[edge]
        total += term
    return Fraction(total, prod(denominators))


def perfect_matchings(
    graph: Multigraph, cap: int | None = None
) -> Iterator[tuple[int, ...]]:
    """
    Yield every perfect matching as a sorted tuple of edge ids.

    Backtracks on the lowest unmatched vertex; parallel edges give distinct
    matchings and loops never participate.
    """
    if graph.vertex_count % 2:
        return
    cap = get_setting("matching_cap") if cap is None else cap

    adjacency = [[] for _ in range(graph.vertex_count)]
    for edge, (u, v) in enumerate(graph.edges):
        if u != v:
            adjacency[u].append((v, edge))
            adjacency[v].append((u, edge))

    matched = [False] * graph.vertex_count
    chosen: list[int] = []
    produced = 0

    def extend(start):
        nonlocal produced
        vertex = start
        while vertex < graph.vertex_count and matched[vertex]:
            vertex += 1
        if vertex == graph.vertex_count:
            produced += 1
            if produced > cap:
                raise CapacityError(
                    f"more than {cap} perfect matchings", required=produced, cap=cap
                )
            yield tuple(sorted(chosen))
            return
        matched[vertex] = True
        for neighbour, edge in adjacency[vertex]:
            if matched[neighbour]:
                continue
            matched[neighbour] = True
            chosen.append(edge)
            yield from extend(vertex + 1)
            chosen.pop()
            matched[neighbour] = False
        matched[vertex] = False

    yield from extend(0)


def matching_oracle(graph: Multigraph, weights: "WeightAssignment", cap=None):
    """Sum over perfect matchings of the product of their edge weights."""
    total = weights.zero
    for matching in perfect_matchings(graph, cap):
        term = weights.one
        for edge in matching:
            term *= weights[edge]
        total += term
    return total
