"""
Edge weights, skew-symmetric adjacency matrices and Pfaffians.

Two scalar domains are supported: ``"exact"`` (``fractions.Fraction``) and
``"float"`` (numpy float64). Exact Pfaffians use sparse skew elimination with
a fewest-nonzeros pivot; float Pfaffians use a Parlett-Reid style
tridiagonalisation with partial pivoting.
"""

from __future__ import annotations

import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exceptions import InputError, StructuralError

logger = logging.getLogger(__name__)

EXACT = "exact"
FLOAT = "float"
DOMAINS = (EXACT, FLOAT)


def _coerce(value, domain):
    if domain == FLOAT:
        return float(Fraction(value) if isinstance(value, str) else value)
    if isinstance(value, float):
        return Fraction(str(value))
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"invalid weight {value!r}") from exc


@dataclass(frozen=True)
class WeightAssignment:
    values: tuple = ()
    domain: str = EXACT

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise InputError(f"unknown scalar domain {self.domain!r}")
        object.__setattr__(
            self, "values", tuple(_coerce(v, self.domain) for v in self.values)
        )

    @classmethod
    def from_mapping(cls, mapping, edge_count, domain=EXACT) -> "WeightAssignment":
        keys = {int(k): v for k, v in mapping.items()}
        unknown = sorted(k for k in keys if not 0 <= k < edge_count)
        if unknown:
            raise InputError(f"weights given for unknown edges {unknown}")
        missing = [e for e in range(edge_count) if e not in keys]
        if missing:
            raise InputError(f"missing weight for edge {missing[0]}")
        return cls(tuple(keys[e] for e in range(edge_count)), domain)

    @classmethod
    def ones(cls, edge_count, domain=EXACT) -> "WeightAssignment":
        return cls((1,) * edge_count, domain)

    @classmethod
    def random(cls, edge_count, rng, weight_range=(1, 97)) -> "WeightAssignment":
        """Positive rationals with numerator and denominator drawn from ``weight_range``."""
        low, high = weight_range
        numerators = rng.integers(low, high + 1, size=edge_count)
        denominators = rng.integers(low, high + 1, size=edge_count)
        return cls(
            tuple(Fraction(int(p), int(q)) for p, q in zip(numerators, denominators))
        )

    def __len__(self):
        return len(self.values)

    def __getitem__(self, edge):
        return self.values[edge]

    @property
    def is_exact(self) -> bool:
        return self.domain == EXACT

    @property
    def zero(self):
        return Fraction(0) if self.is_exact else 0.0

    @property
    def one(self):
        return Fraction(1) if self.is_exact else 1.0

    def select(self, edges) -> "WeightAssignment":
        return WeightAssignment(tuple(self.values[e] for e in edges), self.domain)

    def lifted(self, edge_count) -> "WeightAssignment":
        """Pad with weight 1 up to ``edge_count`` edges (gadget edges)."""
        return WeightAssignment(
            self.values + (self.one,) * (edge_count - len(self.values)), self.domain
        )

    def to_float(self) -> "WeightAssignment":
        return WeightAssignment(self.values, FLOAT)

    def as_dict(self) -> dict[str, str]:
        return {str(edge): str(value) for edge, value in enumerate(self.values)}


@dataclass(frozen=True)
class SkewMatrix:
    """Skew-symmetric matrix stored as its nonzero upper-triangle entries."""

    size: int
    entries: dict = field(default_factory=dict)
    domain: str = EXACT

    def __getitem__(self, key):
        i, j = key
        zero = Fraction(0) if self.domain == EXACT else 0.0
        if i < j:
            return self.entries.get((i, j), zero)
        if i > j:
            return -self.entries.get((j, i), zero)
        return zero

    @classmethod
    def from_dense(cls, rows, domain=EXACT) -> "SkewMatrix":
        size = len(rows)
        entries = {}
        for i in range(size):
            if rows[i][i]:
                raise StructuralError(f"diagonal entry {i} is nonzero")
            for j in range(i + 1, size):
                if rows[i][j] != -rows[j][i]:
                    raise StructuralError(f"entries ({i}, {j}) are not skew")
                if rows[i][j]:
                    entries[(i, j)] = _coerce(rows[i][j], domain)
        return cls(size, entries, domain)

    def to_dense(self) -> list[list]:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]

    def to_numpy(self) -> np.ndarray:
        array = np.zeros((self.size, self.size))
        for (i, j), value in self.entries.items():
            array[i, j] = float(value)
            array[j, i] = -float(value)
        return array

    def direct_sum(self, other: "SkewMatrix") -> "SkewMatrix":
        entries = dict(self.entries)
        for (i, j), value in other.entries.items():
            entries[(i + self.size, j + self.size)] = value
        return SkewMatrix(self.size + other.size, entries, self.domain)


def skew_adjacency(graph, orientation, weights, ordering=None) -> SkewMatrix:
    """
    Weighted skew adjacency matrix: each edge oriented tail to head adds
    ``+w`` at ``(tail, head)`` and ``-w`` at ``(head, tail)``.

    ``orientation`` is a bitmask (or anything with ``.bits``); bit 0 orients
    an edge from its A end to its B end. ``ordering[v]`` is the row of
    vertex ``v`` and defaults to the identity. Loops contribute nothing.
    """
    bits = getattr(orientation, "bits", orientation)
    if len(weights) != graph.edge_count:
        raise InputError(
            f"{len(weights)} weights given for {graph.edge_count} edges"
        )
    if ordering is None:
        ordering = range(graph.vertex_count)
    elif sorted(ordering) != list(range(graph.vertex_count)):
        raise StructuralError("vertex ordering must be a bijection onto 0..n-1")

    entries = {}
    for edge, (u, v) in enumerate(graph.edges):
        if u == v:
            continue
        tail, head = (v, u) if bits >> edge & 1 else (u, v)
        i, j = ordering[tail], ordering[head]
        value = weights[edge]
        if i > j:
            i, j, value = j, i, -value
        entries[(i, j)] = entries.get((i, j), weights.zero) + value
    entries = {key: value for key, value in entries.items() if value}
    return SkewMatrix(graph.vertex_count, entries, weights.domain)


def pfaffian(matrix: SkewMatrix):
    if matrix.domain == FLOAT:
        return pfaffian_array(matrix.to_numpy())
    return _pfaffian_exact(matrix)


def _pfaffian_exact(matrix: SkewMatrix) -> Fraction:
    size = matrix.size
    if size % 2:
        return Fraction(0)
    rows: list[dict[int, Fraction]] = [{} for _ in range(size)]
    for (i, j), value in matrix.entries.items():
        value = Fraction(value)
        rows[i][j] = value
        rows[j][i] = -value

    active = list(range(size))
    result = Fraction(1)
    while active:
        r = min(active, key=lambda i: (len(rows[i]), i))
        if not rows[r]:
            return Fraction(0)
        p = min(rows[r], key=lambda j: (len(rows[j]), j))

        # Move r then p to the front of the remaining order.
        position = bisect_left(active, r)
        active.pop(position)
        second = bisect_left(active, p)
        active.pop(second)
        if (position + second) % 2:
            result = -result
        pivot = rows[r][p]
        result *= pivot

        from_r = {j: v for j, v in rows[r].items() if j != p}
        from_p = {j: v for j, v in rows[p].items() if j != r}
        for j in from_r:
            del rows[j][r]
        for j in from_p:
            del rows[j][p]
        rows[r], rows[p] = {}, {}

        touched = sorted(set(from_r) | set(from_p))
        for index, i in enumerate(touched):
            r_i, p_i = from_r.get(i), from_p.get(i)
            for j in touched[index + 1 :]:
                r_j, p_j = from_r.get(j), from_p.get(j)
                update = 0
                if p_i is not None and r_j is not None:
                    update += p_i * r_j
                if r_i is not None and p_j is not None:
                    update -= r_i * p_j
                if not update:
                    continue
                value = rows[i].get(j, 0) + update / pivot
                if value:
                    rows[i][j] = value
                    rows[j][i] = -value
                else:
                    rows[i].pop(j, None)
                    rows[j].pop(i, None)
    return result


def pfaffian_array(array) -> float:
    """Pfaffian of a dense real skew-symmetric array."""
    a = np.array(array, dtype=float, copy=True)
    size = a.shape[0]
    if size % 2:
        return 0.0
    value = 1.0
    for k in range(0, size - 1, 2):
        pivot = k + 1 + int(np.abs(a[k + 1 :, k]).argmax())
        if pivot != k + 1:
            a[[k + 1, pivot], k:] = a[[pivot, k + 1], k:]
            a[k:, [k + 1, pivot]] = a[k:, [pivot, k + 1]]
            value = -value
        if a[k + 1, k] == 0.0:
            return 0.0
        value *= a[k, k + 1]
        if k + 2 < size:
            tau = a[k, k + 2 :] / a[k, k + 1]
            rank_one = np.outer(tau, a[k + 2 :, k + 1])
            block = a[k + 2 :, k + 2 :]
            block += rank_one
            block -= rank_one.T
    return float(value)


def projected_pfaffian(blowup, orientation, weights, ordering=None):
    """Pfaffian of ``G^sigma`` with original weights and weight 1 on gadgets."""
    lifted = weights.lifted(blowup.graph.edge_count)
    return pfaffian(skew_adjacency(blowup.graph, orientation, lifted, ordering))
