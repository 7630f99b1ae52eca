"""
Linear algebra over GF(2) on bitset rows.

Vectors are Python ints, bit i holding coordinate i. This keeps rows of a few
thousand coordinates cheap to XOR and lets edge subsets, cycle coordinates and
homology classes share one representation.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    """Return the number of set bits of ``x`` modulo 2."""
    return bin(x).count("1") & 1


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def from_bits(positions: Iterable[int]) -> int:
    value = 0
    for position in positions:
        value ^= 1 << position
    return value


def lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


class InconsistentSystemError(ValueError):
    """Raised by :func:`solve` when an equation contradicts the earlier ones."""

    def __init__(self, index):
        self.index = index
        super().__init__(f"equation {index} is inconsistent with the previous ones")


class EchelonBasis:
    """
    Incrementally built, fully reduced row echelon basis.

    Each row carries a ``tag`` that is XORed along with it, so callers can
    record which input vectors a reduced row is made of.
    """

    def __init__(self):
        self._rows: dict[int, tuple[int, int]] = {}

    def __len__(self):
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._rows))

    def rows(self) -> list[tuple[int, int]]:
        return [self._rows[p] for p in sorted(self._rows)]

    def reduce(self, vector: int, tag: int = 0) -> tuple[int, int]:
        for pivot, (row, row_tag) in self._rows.items():
            if vector >> pivot & 1:
                vector ^= row
                tag ^= row_tag
        return vector, tag

    def add(self, vector: int, tag: int = 0) -> bool:
        """Insert ``vector``; return False if it was already in the span."""
        vector, tag = self.reduce(vector, tag)
        if not vector:
            return False
        pivot = lowest_bit(vector)
        for other, (row, row_tag) in list(self._rows.items()):
            if row >> pivot & 1:
                self._rows[other] = (row ^ vector, row_tag ^ tag)
        self._rows[pivot] = (vector, tag)
        return True

    def contains(self, vector: int) -> bool:
        return self.reduce(vector)[0] == 0


def rank(rows: Iterable[int]) -> int:
    basis = EchelonBasis()
    for row in rows:
        basis.add(row)
    return basis.rank


def solve(equations: Sequence[tuple[int, int]], num_vars: int) -> int:
    """
    Solve ``row . x = rhs`` for every ``(row, rhs)`` in ``equations``.

    Free variables are set to zero. Raises :class:`InconsistentSystemError`
    naming the first equation that cannot be satisfied.
    """
    var_mask = (1 << num_vars) - 1
    pivots: dict[int, int] = {}
    for index, (row, rhs) in enumerate(equations):
        augmented = (row & var_mask) | ((rhs & 1) << num_vars)
        for pivot, pivot_row in pivots.items():
            if augmented >> pivot & 1:
                augmented ^= pivot_row
        variables = augmented & var_mask
        if not variables:
            if augmented:
                raise InconsistentSystemError(index)
            continue
        pivot = lowest_bit(variables)
        for other in list(pivots):
            if pivots[other] >> pivot & 1:
                pivots[other] ^= augmented
        pivots[pivot] = augmented

    solution = 0
    for pivot, pivot_row in pivots.items():
        if pivot_row >> num_vars & 1:
            solution |= 1 << pivot
    return solution
