"""
Rotation systems, face tracing, genus and the homology of the embedding.

A rotation system lists, for every vertex, its incident half-edges in
counterclockwise order. The face permutation is ``phi(h) = succ(h ^ 1)``:
cross the edge, then turn to the next half-edge around the head vertex.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import factorial, prod

from .conf import get_setting
from .exceptions import CapacityError, InvariantViolation, StructuralError
from .gf2 import EchelonBasis, iter_bits, parity
from .graph import EdgeSubset, Multigraph, half_token, spanning_forest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RotationSystem:
    orders: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "orders", tuple(tuple(int(h) for h in order) for order in self.orders)
        )

    @classmethod
    def from_neighbor_orders(cls, graph: Multigraph, orders) -> "RotationSystem":
        """Build a rotation of a simple graph from per-vertex neighbour orders."""
        lookup = {}
        for edge, (u, v) in enumerate(graph.edges):
            if (u, v) in lookup or u == v:
                raise StructuralError(
                    f"edge {edge} makes the graph non-simple; give half-edges explicitly"
                )
            lookup[(u, v)] = 2 * edge
            lookup[(v, u)] = 2 * edge + 1
        try:
            return cls(
                tuple(
                    tuple(lookup[(vertex, nb)] for nb in order)
                    for vertex, order in enumerate(orders)
                )
            )
        except KeyError as exc:
            raise StructuralError(f"no edge between {exc.args[0]}") from exc

    def validate(self, graph: Multigraph):
        if len(self.orders) != graph.vertex_count:
            raise StructuralError(
                f"rotation has {len(self.orders)} vertices, graph has {graph.vertex_count}"
            )
        for vertex, order in enumerate(self.orders):
            if sorted(order) != sorted(graph.incident_halves[vertex]):
                raise StructuralError(
                    f"rotation at vertex {vertex} must list each incident half-edge "
                    f"exactly once, got {[half_token(h) for h in order]}"
                )

    def successors(self, half_count: int) -> list[int]:
        succ = [0] * half_count
        for order in self.orders:
            for index, half in enumerate(order):
                succ[half] = order[(index + 1) % len(order)]
        return succ

    def predecessors(self, half_count: int) -> list[int]:
        pred = [0] * half_count
        for order in self.orders:
            for index, half in enumerate(order):
                pred[half] = order[index - 1]
        return pred

    def rotated(self, vertex: int, steps: int) -> "RotationSystem":
        """Same cyclic orders with the list at ``vertex`` started elsewhere."""
        orders = list(self.orders)
        order = orders[vertex]
        if order:
            steps %= len(order)
            orders[vertex] = order[steps:] + order[:steps]
        return RotationSystem(tuple(orders))

    def restrict(self, component) -> "RotationSystem":
        local = {}
        for local_edge, edge in enumerate(component.edges):
            local[2 * edge] = 2 * local_edge
            local[2 * edge + 1] = 2 * local_edge + 1
        return RotationSystem(
            tuple(
                tuple(local[h] for h in self.orders[vertex])
                for vertex in component.vertices
            )
        )


@dataclass(frozen=True)
class FaceStructure:
    faces: tuple[tuple[int, ...], ...]
    boundaries: tuple[EdgeSubset, ...]
    face_count: int
    component_genera: tuple[int, ...]

    @property
    def genus(self) -> int:
        return sum(self.component_genera)

    @property
    def component_count(self) -> int:
        return len(self.component_genera)


def face_permutation(graph: Multigraph, rotation: RotationSystem) -> list[int]:
    succ = rotation.successors(2 * graph.edge_count)
    return [succ[h ^ 1] for h in range(2 * graph.edge_count)]


def trace_faces(graph: Multigraph, rotation: RotationSystem) -> FaceStructure:
    rotation.validate(graph)
    phi = face_permutation(graph, rotation)
    seen = [False] * len(phi)
    faces = []
    for start in range(len(phi)):
        if seen[start]:
            continue
        face = []
        half = start
        while not seen[half]:
            seen[half] = True
            face.append(half)
            half = phi[half]
        faces.append(tuple(face))

    boundaries = []
    for face in faces:
        boundary = 0
        for half in face:
            boundary ^= 1 << (half >> 1)
        boundaries.append(boundary)

    genera = []
    component_of = {}
    for index, component in enumerate(graph.components):
        for vertex in component.vertices:
            component_of[vertex] = index
    face_totals = [0] * len(graph.components)
    for face in faces:
        face_totals[component_of[graph.half_vertex(face[0])]] += 1
    for index, component in enumerate(graph.components):
        if component.graph.edge_count == 0:
            face_totals[index] = 1
        euler = (
            component.graph.vertex_count - component.graph.edge_count + face_totals[index]
        )
        if euler % 2 or euler > 2:
            raise InvariantViolation(f"component {index} has Euler characteristic {euler}")
        genera.append((2 - euler) // 2)

    return FaceStructure(tuple(faces), tuple(boundaries), sum(face_totals), tuple(genera))


def genus(graph: Multigraph, rotation: RotationSystem) -> int:
    return trace_faces(graph, rotation).genus


@dataclass(frozen=True)
class ReducedWord:
    """Cyclic word of the half-edges left at the single vertex after contraction."""

    halves: tuple[int, ...]

    @property
    def loop_edges(self) -> tuple[int, ...]:
        return tuple(sorted({h >> 1 for h in self.halves}))

    def positions(self) -> dict[int, tuple[int, int]]:
        found: dict[int, list[int]] = {}
        for index, half in enumerate(self.halves):
            found.setdefault(half >> 1, []).append(index)
        return {edge: (spots[0], spots[1]) for edge, spots in found.items()}

    def interleave_masks(self) -> dict[int, EdgeSubset]:
        """For each loop, the loops with exactly one end strictly inside it."""
        prefix = [0]
        for half in self.halves:
            prefix.append(prefix[-1] ^ (1 << (half >> 1)))
        return {
            edge: prefix[second] ^ prefix[first + 1]
            for edge, (first, second) in self.positions().items()
        }

    def to_ribbon_graph(self) -> tuple[Multigraph, RotationSystem]:
        """One-vertex graph with loops renumbered ``0..L-1`` in edge order."""
        renumber = {edge: index for index, edge in enumerate(self.loop_edges)}
        graph = Multigraph(1,tuple((0, 0) for _ in renumber))
        order = tuple(2 * renumber[h >> 1] + (h & 1) for h in self.halves)
        return graph, RotationSystem((order,))


def one_vertex_reduction(
    graph: Multigraph, rotation: RotationSystem, tree: EdgeSubset
) -> ReducedWord:
    """
    Contract the spanning tree ``tree`` and read off the remaining word.

    Contracting ``e = (u, v)`` splices the rotation at ``v`` into the one at
    ``u`` in place of the two halves of ``e``, which preserves the faces.
    """
    rotation.validate(graph)
    if not graph.is_connected():
        raise StructuralError("one-vertex reduction needs a connected graph")
    tree_edges = list(iter_bits(tree))
    if len(tree_edges) != graph.vertex_count - 1 or any(
        graph.is_loop(e) for e in tree_edges
    ):
        raise StructuralError(f"edges {tree_edges} do not form a spanning tree")
    if spanning_forest(graph, tree) != tree:
        raise StructuralError(f"edges {tree_edges} do not form a spanning tree")

    half_count = 2 * graph.edge_count
    succ = rotation.successors(half_count)
    pred = rotation.predecessors(half_count)
    alive = [True] * half_count

    for edge in tree_edges:
        h, h2 = 2 * edge, 2 * edge + 1
        p, q, r, s = pred[h], succ[h], pred[h2], succ[h2]
        h_alone, h2_alone = q == h, s == h2
        if not h_alone and not h2_alone:
            succ[p], pred[s] = s, p
            succ[r], pred[q] = q, r
        elif h_alone and not h2_alone:
            succ[r], pred[s] = s, r
        elif h2_alone and not h_alone:
            succ[p], pred[q] = q, p
        alive[h] = alive[h2] = False

    remaining = [h for h in range(half_count) if alive[h]]
    if not remaining:
        return ReducedWord(())
    word = [remaining[0]]
    half = succ[remaining[0]]
    while half != remaining[0]:
        word.append(half)
        half = succ[half]
    if len(word) != len(remaining):
        raise StructuralError("contraction left more than one vertex")
    return ReducedWord(tuple(word))


def intersection_parity(word: ReducedWord, e: int, f: int) -> int:
    """1 if loops ``e`` and ``f`` interleave in the word, else 0."""
    if e == f:
        raise StructuralError("intersection parity needs two distinct loops")
    positions = word.positions()
    if e not in positions or f not in positions:
        raise StructuralError(f"loops {e} and {f} must both appear in the word")
    first, second = positions[e]
    return sum(first < spot < second for spot in positions[f]) & 1


def loop_pairing(masks: dict, x: EdgeSubset, y: EdgeSubset) -> int:
    result = 0
    for edge in iter_bits(x):
        result ^= parity(masks.get(edge, 0) & y)
    return result


@dataclass(frozen=True)
class HomologyData:
    """
    Symplectic basis of the first homology of a connected embedded graph.

    ``symplectic_basis`` holds ``a_1, b_1, ..., a_g, b_g`` as loop-edge
    subsets. ``edge_classes[e]`` is the class of edge ``e``: bit ``2i`` is its
    ``a_i`` coefficient and bit ``2i + 1`` its ``b_i`` coefficient.
    """

    genus: int
    tree: EdgeSubset
    loop_edges: tuple[int, ...]
    boundary_rank: int
    symplectic_basis: tuple[EdgeSubset, ...]
    edge_classes: tuple[int, ...]
    intersection_matrix: tuple[tuple[int, ...], ...]
    masks: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def dimension(self) -> int:
        return 2 * self.genus

    def pair(self, x: EdgeSubset, y: EdgeSubset) -> int:
        """Intersection number mod 2 of two loop-edge subsets."""
        return loop_pairing(self.masks, x, y)

    def class_of(self, subset: EdgeSubset) -> int:
        result = 0
        for edge in iter_bits(subset):
            result ^= self.edge_classes[edge]
        return result


def _symplectic_reduction(vectors, pair):
    remaining = list(vectors)
    basis = []
    while remaining:
        a = remaining.pop(0)
        partner = next(
            (index for index, c in enumerate(remaining) if pair(a, c)), None
        )
        if partner is None:
            raise InvariantViolation("intersection form is degenerate on the loop space")
        b = remaining.pop(partner)
        swept = []
        for c in remaining:
            with_b, with_a = pair(c, b), pair(c, a)
            if with_b:
                c ^= a
            if with_a:
                c ^= b
            swept.append(c)
        remaining = swept
        basis.extend((a, b))
    return basis


def homology_data(
    graph: Multigraph, rotation: RotationSystem, required_tree_edges: EdgeSubset = 0
) -> HomologyData:
    faces = trace_faces(graph, rotation)
    if not graph.is_connected():
        raise StructuralError("homology data needs a connected graph")
    tree = spanning_forest(graph, required_tree_edges)
    word = one_vertex_reduction(graph, rotation, tree)
    masks = word.interleave_masks()
    loop_mask = graph.full_subset ^ tree

    boundaries = EchelonBasis()
    for boundary in faces.boundaries:
        boundaries.add(boundary & loop_mask)
    loop_edges = tuple(iter_bits(loop_mask))
    dimension = len(loop_edges) - boundaries.rank
    if dimension != 2 * faces.genus:
        raise InvariantViolation(
            f"homology has dimension {dimension}, expected 2g = {2 * faces.genus}"
        )

    pivots = set(boundaries.pivots)
    complement = [1 << e for e in loop_edges if e not in pivots]

    def pair(x, y):
        return loop_pairing(masks, x, y)

    basis = _symplectic_reduction(complement, pair)

    classes = []
    for edge in range(graph.edge_count):
        value = 0
        if loop_mask >> edge & 1:
            for i in range(faces.genus):
                value |= pair(1 << edge, basis[2 * i + 1]) << (2 * i)
                value |= pair(1 << edge, basis[2 * i]) << (2 * i + 1)
        classes.append(value)

    matrix = tuple(tuple(pair(x, y) for y in basis) for x in basis)
    for i, row in enumerate(matrix):
        for j, value in enumerate(row):
            if value != (1 if i ^ 1 == j else 0):
                raise InvariantViolation("intersection matrix is not standard symplectic")

    logger.debug(
        f"homology: genus {faces.genus}, {len(loop_edges)} loops, "
        f"boundary rank {boundaries.rank}"
    )
    return HomologyData(
        genus=faces.genus,
        tree=tree,
        loop_edges=loop_edges,
        boundary_rank=boundaries.rank,
        symplectic_basis=tuple(basis),
        edge_classes=tuple(classes),
        intersection_matrix=matrix,
        masks=masks,
    )


def rotation_count(graph: Multigraph) -> int:
    return prod(factorial(max(graph.degree(v) - 1, 0)) for v in range(graph.vertex_count))


def minimum_genus_rotation(
    graph: Multigraph, limit: int | None = None
) -> tuple[RotationSystem, int]:
    """Exhaustively search rotation systems for one of least genus."""
    limit = get_setting("rotation_search_limit") if limit is None else limit
    total = rotation_count(graph)
    if total > limit:
        raise CapacityError(
            f"{total} rotation systems exceed the search limit {limit}",
            required=total,
            cap=limit,
        )
    choices = []
    for vertex in range(graph.vertex_count):
        halves = sorted(graph.incident_halves[vertex])
        if not halves:
            choices.append([()])
            continue
        choices.append(
            [(halves[0],) + rest for rest in itertools.permutations(halves[1:])]
        )

    best, best_genus = None, None
    for orders in itertools.product(*choices):
        rotation = RotationSystem(tuple(orders))
        value = trace_faces(graph, rotation).genus
        if best_genus is None or value < best_genus:
            best, best_genus = rotation, value
            if value == 0:
                break
    logger.info(f"minimum genus search visited up to {total} rotations: genus {best_genus}")
    return best, best_genus
