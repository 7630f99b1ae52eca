"""
Fisher blow-up: replace every vertex of degree ``d`` by a planar gadget.

The gadget at a vertex of degree ``d`` is a path on ``6d`` local vertices
``0..6d-1`` plus ``2d`` chords ``(3j, 3j + 2)``. Local edges are numbered
path edges first (``(i, i + 1)`` has index ``i``), then chords (index
``6d - 1 + j``). The ``t``-th half-edge of the cyclic order at the vertex
attaches to local vertex ``6t + 1``.

Perfect matchings of the blown-up graph restrict on original edges to even
subsets, and every even subset extends in exactly one way.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import lru_cache

from .exceptions import InvariantViolation, StructuralError
from .gf2 import iter_bits, parity
from .graph import EdgeSubset, Multigraph
from .surface import RotationSystem, trace_faces

logger = logging.getLogger(__name__)


def gadget_size(degree: int) -> tuple[int, int]:
    """Local vertex and edge counts of a gadget."""
    return 6 * degree, 8 * degree - 1


def attachment(position: int) -> int:
    return 6 * position + 1


def local_edges(degree: int) -> list[tuple[int, int]]:
    path = [(i, i + 1) for i in range(6 * degree - 1)]
    chords = [(3 * j, 3 * j + 2) for j in range(2 * degree)]
    return path + chords


def local_rotation(degree, edge_half, stub_half) -> list[tuple[int, ...]]:
    """
    Counterclockwise order at each local vertex: right path half, chord half,
    left path half, external half.

    ``edge_half(index, side)`` maps a local edge to a half-edge id and
    ``stub_half(position)`` gives the external half at an attachment.
    """
    count = 6 * degree
    chord_base = count - 1
    orders = []
    for i in range(count):
        order = []
        if i < count - 1:
            order.append(edge_half(i, 0))
        if i % 3 == 0:
            order.append(edge_half(chord_base + i // 3, 0))
        elif i % 3 == 2:
            order.append(edge_half(chord_base + (i - 2) // 3, 1))
        if i > 0:
            order.append(edge_half(i - 1, 1))
        if i % 6 == 1:
            order.append(stub_half((i - 1) // 6))
        orders.append(tuple(order))
    return orders


@dataclass(frozen=True)
class GadgetLayout:
    """
    A gadget closed up with a hub vertex joined to every attachment.

    The closed graph is planar; ``orientation`` is clockwise-odd on every
    interior face (those not touching the hub).
    """

    degree: int
    graph: Multigraph
    rotation: RotationSystem
    orientation: int
    interior_faces: tuple[tuple[int, ...], ...]


def agreeing_halves(face, bits: int) -> int:
    """Number of half-edges of ``face`` traversed along the orientation."""
    return sum((half & 1) == (bits >> (half >> 1) & 1) for half in face)


@lru_cache(maxsize=None)
def gadget_planar_rotation_and_kasteleyn(degree: int) -> GadgetLayout:
    if degree < 1:
        raise StructuralError("gadgets exist for degree at least 1")
    vertex_count, edge_count = gadget_size(degree)
    hub = vertex_count
    edges = local_edges(degree) + [(attachment(t), hub) for t in range(degree)]
    graph = Multigraph(vertex_count + 1, tuple(edges))

    orders = local_rotation(
        degree,
        lambda index, side: 2 * index + side,
        lambda position: 2 * (edge_count + position),
    )
    orders.append(
        tuple(2 * (edge_count + t) + 1 for t in reversed(range(degree)))
    )
    rotation = RotationSystem(tuple(orders))
    faces = trace_faces(graph, rotation)
    if faces.genus != 0:
        raise InvariantViolation(f"degree {degree} gadget closes up with genus {faces.genus}")

    stub_halves = set(range(2 * edge_count, 2 * graph.edge_count))
    interior = [face for face in faces.faces if not stub_halves.intersection(face)]

    # Dual tree rooted at the merged outer region, fixed from the leaves up.
    outer = -1
    node_of_half = {}
    for index, face in enumerate(faces.faces):
        node = outer if stub_halves.intersection(face) else index
        for half in face:
            node_of_half[half] = node
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for edge in range(edge_count):
        first, second = node_of_half[2 * edge], node_of_half[2 * edge + 1]
        if first != second:
            adjacency.setdefault(first, []).append((second, edge))
            adjacency.setdefault(second, []).append((first, edge))

    parent_edge = {outer: None}
    order = [outer]
    for node in order:
        for neighbour, edge in adjacency.get(node, ()):
            if neighbour not in parent_edge:
                parent_edge[neighbour] = edge
                order.append(neighbour)

    bits = 0
    for node in reversed(order):
        if node == outer:
            continue
        if agreeing_halves(faces.faces[node], bits) % 2 == 0:
            bits ^= 1 << parent_edge[node]

    for face in interior:
        if agreeing_halves(face, bits) % 2 == 0:
            raise InvariantViolation(f"degree {degree} gadget face {face} is not odd")
    return GadgetLayout(degree, graph, rotation, bits, tuple(interior))


@dataclass(frozen=True)
class Gadget:
    vertex: int
    degree: int
    first_vertex: int
    first_edge: int
    halves: tuple[int, ...]

    @property
    def edge_ids(self) -> range:
        return range(self.first_edge, self.first_edge + gadget_size(self.degree)[1])

    def attachment_vertex(self, position: int) -> int:
        return self.first_vertex + attachment(position)


@dataclass(frozen=True)
class FisherBlowup:
    """
    The blown-up graph ``G^sigma``.

    Edges ``0..m-1`` are the images of the original edges (same ids, same
    sides); gadget edges follow, vertex by vertex. ``delta`` orients gadget
    edges clockwise-odd on every gadget face and leaves original edges at 0.
    """

    source: Multigraph
    graph: Multigraph
    sigma: tuple[tuple[int, ...], ...]
    gadgets: tuple[Gadget | None, ...]
    delta: int
    rotation: RotationSystem | None = None

    @property
    def gadget_edges(self) -> EdgeSubset:
        return self.graph.full_subset ^ self.source.full_subset

    @property
    def gadget_path_edges(self) -> EdgeSubset:
        mask = 0
        for gadget in self.gadgets:
            if gadget is not None:
                for index in range(6 * gadget.degree - 1):
                    mask |= 1 << (gadget.first_edge + index)
        return mask


def derive_sigma(rotation: RotationSystem) -> tuple[tuple[int, ...], ...]:
    """Cut each cyclic order at its smallest half-edge id."""
    sigma = []
    for order in rotation.orders:
        if not order:
            sigma.append(())
            continue
        start = order.index(min(order))
        sigma.append(order[start:] + order[:start])
    return tuple(sigma)


def blow_up(graph: Multigraph, sigma) -> FisherBlowup:
    sigma = tuple(tuple(order) for order in sigma)
    if len(sigma) != graph.vertex_count:
        raise StructuralError("sigma must list an order for every vertex")
    position = {}
    for vertex, order in enumerate(sigma):
        if sorted(order) != sorted(graph.incident_halves[vertex]):
            raise StructuralError(
                f"order at vertex {vertex} must list its incident half-edges once each"
            )
        for t, half in enumerate(order):
            position[half] = (vertex, t)

    first_vertex = []
    running = 0
    for order in sigma:
        first_vertex.append(running)
        running += 6 * len(order)

    def image(half):
        vertex, t = position[half]
        return first_vertex[vertex] + attachment(t)

    edges = [(image(2 * e), image(2 * e + 1)) for e in range(graph.edge_count)]
    gadgets = []
    delta = 0
    for vertex, order in enumerate(sigma):
        degree = len(order)
        if degree == 0:
            gadgets.append(None)
            continue
        base = len(edges)
        offset = first_vertex[vertex]
        edges.extend((offset + a, offset + b) for a, b in local_edges(degree))
        delta |= gadget_planar_rotation_and_kasteleyn(degree).orientation << base
        gadgets.append(Gadget(vertex, degree, offset, base, order))

    blown = Multigraph(running, tuple(edges))
    logger.debug(
        f"blow-up: {graph.vertex_count} -> {blown.vertex_count} vertices, "
        f"{graph.edge_count} -> {blown.edge_count} edges"
    )
    return FisherBlowup(graph, blown, sigma, tuple(gadgets), delta)


def blowup_rotation(
    graph: Multigraph, rotation: RotationSystem, blowup: FisherBlowup
) -> RotationSystem:
    """Rotation of ``G^sigma`` inherited from the planar gadget drawings."""
    rotation.validate(graph)
    if derive_sigma(rotation) != blowup.sigma:
        raise StructuralError("blow-up orders were not derived from this rotation")
    orders = []
    for gadget in blowup.gadgets:
        if gadget is None:
            continue
        orders.extend(
            local_rotation(
                gadget.degree,
                lambda index, side, g=gadget: 2 * (g.first_edge + index) + side,
                lambda t, g=gadget: g.halves[t],
            )
        )
    result = RotationSystem(tuple(orders))
    source_genus = trace_faces(graph, rotation).genus
    blown_genus = trace_faces(blowup.graph, result).genus
    if source_genus != blown_genus:
        raise InvariantViolation(
            f"blow-up changed the genus from {source_genus} to {blown_genus}"
        )
    return result


def with_rotation(graph: Multigraph, rotation: RotationSystem) -> FisherBlowup:
    """Blow up along the orders derived from ``rotation`` and embed the result."""
    blowup = blow_up(graph, derive_sigma(rotation))
    return replace(blowup, rotation=blowup_rotation(graph, rotation, blowup))


def _forward(degree: int, vertex: int) -> list[tuple[int, int]]:
    """Local edges from ``vertex`` to later local vertices."""
    count = 6 * degree
    result = []
    if vertex + 1 < count:
        result.append((vertex + 1, vertex))
    if vertex % 3 == 0:
        result.append((vertex + 2, count - 1 + vertex // 3))
    return result


@lru_cache(maxsize=None)
def gadget_completions(degree: int, covered: int) -> tuple[int, tuple[int, ...]]:
    """
    Count matchings of the gadget minus the attachments in ``covered``.

    ``covered`` is a bitmask over attachment positions. Returns the count and
    the local edge indices of one completion (empty when there is none).
    Scans local vertices in order keeping the set of vertices still waiting
    for a later partner.
    """
    count = 6 * degree
    blocked = {attachment(t) for t in iter_bits(covered)}
    states: dict[frozenset, tuple[int, tuple[int, ...]]] = {frozenset(): (1, ())}
    for vertex in range(count):
        following: dict[frozenset, tuple[int, tuple[int, ...]]] = {}

        def push(key, total, witness):
            if key in following:
                following[key] = (following[key][0] + total, following[key][1])
            else:
                following[key] = (total, witness)

        for pending, (total, witness) in states.items():
            if vertex in blocked:
                push(pending, total, witness)
                continue
            push(pending | {vertex}, total, witness)
            for waiting in pending:
                for target, index in _forward(degree, waiting):
                    if target == vertex:
                        push(pending - {waiting}, total, witness + (index,))

        states = {
            pending: value
            for pending, value in following.items()
            if all(
                any(target > vertex for target, _ in _forward(degree, waiting))
                for waiting in pending
            )
        }

    total, witness = states.get(frozenset(), (0, ()))
    return total, tuple(sorted(witness))


def extend_even_to_matching(blowup: FisherBlowup, subset: EdgeSubset) -> tuple[int, ...]:
    """The unique perfect matching of ``G^sigma`` restricting to ``subset``."""
    matching = list(iter_bits(subset))
    for gadget in blowup.gadgets:
        if gadget is None:
            continue
        covered = 0
        for t, half in enumerate(gadget.halves):
            if subset >> (half >> 1) & 1:
                covered |= 1 << t
        if parity(covered):
            raise StructuralError(f"edge subset is not even at vertex {gadget.vertex}")
        total, local = gadget_completions(gadget.degree, covered)
        if total != 1:
            raise InvariantViolation(
                f"gadget at vertex {gadget.vertex} has {total} completions for {covered:b}"
            )
        matching.extend(gadget.first_edge + index for index in local)
    return tuple(sorted(matching))


def restrict_matching(blowup: FisherBlowup, matching) -> EdgeSubset:
    """Original edges used by a matching of ``G^sigma``."""
    subset = 0
    for edge in matching:
        if edge < blowup.source.edge_count:
            subset |= 1 << edge
    return subset
