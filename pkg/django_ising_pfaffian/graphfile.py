"""
Plain-text graph files and JSON weight files.

Graph file grammar, one record per line::

    V <n>
    E <id> <u> <v>
    R <v>: <half> <half> ...

Half-edges are written ``<edge id>a`` (end at ``u``) or ``<edge id>b`` (end at
``v``). Blank lines and ``#`` comments are ignored. ``R`` lines are optional
as a whole; if any is present, every vertex with edges needs one.
"""

from __future__ import annotations

import json
import re

from .exceptions import GraphFileError, InputError
from .graph import Multigraph, half_token
from .pfaffian import EXACT, WeightAssignment
from .surface import RotationSystem

HALF_PATTERN = re.compile(r"^(\d+)([ab])$")


def _integer(token, line, what):
    try:
        value = int(token)
    except ValueError:
        raise GraphFileError(f"{what} must be an integer, got {token!r}", line) from None
    if value < 0:
        raise GraphFileError(f"{what} must be nonnegative, got {value}", line)
    return value


def parse_graph_file(text: str) -> tuple[Multigraph, RotationSystem | None]:
    vertex_count = None
    edges: dict[int, tuple[int, int, int]] = {}
    rotations: dict[int, tuple[tuple[str, int], ...]] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        section, _, rest = line.partition(" ")
        if section == "V":
            if vertex_count is not None:
                raise GraphFileError("duplicate V line", number)
            vertex_count = _integer(rest.strip(), number, "vertex count")
        elif section == "E":
            if vertex_count is None:
                raise GraphFileError("E line before V line", number)
            parts = rest.split()
            if len(parts) != 3:
                raise GraphFileError("E line needs '<id> <u> <v>'", number)
            edge, u, v = (_integer(p, number, "edge field") for p in parts)
            if edge in edges:
                raise GraphFileError(f"duplicate edge id {edge}", number)
            for endpoint in (u, v):
                if endpoint >= vertex_count:
                    raise GraphFileError(f"vertex {endpoint} out of range", number)
            edges[edge] = (u, v, number)
        elif section.startswith("R"):
            head, colon, body = line.partition(":")
            if not colon:
                raise GraphFileError("R line needs '<v>: <halves>'", number)
            vertex = _integer(head[1:].strip(), number, "rotation vertex")
            if vertex_count is None or vertex >= vertex_count:
                raise GraphFileError(f"rotation for unknown vertex {vertex}", number)
            if vertex in rotations:
                raise GraphFileError(f"duplicate rotation for vertex {vertex}", number)
            halves = []
            for token in body.split():
                match = HALF_PATTERN.match(token)
                if not match:
                    raise GraphFileError(f"bad half-edge token {token!r}", number)
                halves.append(2 * int(match.group(1)) + (match.group(2) == "b"))
            rotations[vertex] = (tuple(halves), number)
        else:
            raise GraphFileError(f"unknown section {section!r}", number)

    if vertex_count is None:
        raise GraphFileError("missing V line")
    missing = [e for e in range(len(edges)) if e not in edges]
    if missing or (edges and max(edges) >= len(edges)):
        raise GraphFileError(f"edge ids must be 0..{len(edges) - 1}, missing {missing}")
    graph = Multigraph(
        vertex_count, tuple(edges[e][:2] for e in range(len(edges)))
    )

    if not rotations:
        return graph, None
    orders = []
    for vertex in range(vertex_count):
        if vertex in rotations:
            halves, number = rotations[vertex]
            if sorted(halves) != sorted(graph.incident_halves[vertex]):
                raise GraphFileError(
                    f"rotation at vertex {vertex} must list each incident half-edge "
                    "exactly once",
                    number,
                )
            orders.append(halves)
        elif graph.degree(vertex):
            raise GraphFileError(f"missing rotation for vertex {vertex}")
        else:
            orders.append(())
    return graph, RotationSystem(tuple(orders))


def serialize_graph_file(graph: Multigraph, rotation: RotationSystem | None = None) -> str:
    lines = [f"V {graph.vertex_count}"]
    lines.extend(f"E {e} {u} {v}" for e, (u, v) in enumerate(graph.edges))
    if rotation is not None:
        for vertex, order in enumerate(rotation.orders):
            tokens = " ".join(half_token(h) for h in order)
            lines.append(f"R {vertex}: {tokens}".rstrip())
    return "\n".join(lines) + "\n"


def _read_text(path, what: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{what} {path} is not valid UTF-8: {exc}") from exc


def read_graph_file(path) -> tuple[Multigraph, RotationSystem | None]:
    return parse_graph_file(_read_text(path, "graph file"))


def parse_weights(data, edge_count: int, domain: str = EXACT) -> WeightAssignment:
    """Weights from a JSON object (or its text) mapping edge ids to values."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InputError(f"weights are not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("weights must be a JSON object of edge id -> value")
    try:
        return WeightAssignment.from_mapping(data, edge_count, domain)
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"invalid weights: {exc}") from exc


def read_weights(path, edge_count: int, domain: str = EXACT) -> WeightAssignment:
    return parse_weights(_read_text(path, "weights file"), edge_count, domain)
