"""
Matching signs, quadratic forms on homology and the Pfaffian family.

The sign of a perfect matching ``M`` of ``G^sigma`` under the base orientation
``D_0`` is ``eps_0 * (-1)^{q(h(E'))}`` where ``E'`` is the even subset it
restricts to and ``q`` is a quadratic form on ``H_1(S; F_2)``. Fitting
``D_0``, ``q`` and ``eps_0`` is a linear system over GF(2); every other
quadratic form is reached by flipping the edges in ``S_q``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import gf2
from .exceptions import CapacityError, InputError, InvariantViolation, StructuralError
from .fisher import FisherBlowup, extend_even_to_matching
from .gf2 import iter_bits, parity
from .graph import EdgeSubset, Multigraph, cycle_basis, even_subsets
from .surface import HomologyData

logger = logging.getLogger(__name__)

MODES = ("quadratic", "exhaustive")


def sign_bit(sign: int) -> int:
    return 0 if sign > 0 else 1


@dataclass(frozen=True)
class Orientation:
    """Bit ``e`` set means edge ``e`` runs from its B end to its A end."""

    bits: int = 0

    def flipped(self, subset: EdgeSubset) -> "Orientation":
        return Orientation(self.bits ^ subset)


def even_mask(genus: int) -> int:
    return int("01" * genus, 2) if genus else 0


def cross_term(x: int, genus: int) -> int:
    """``sum_i x_{2i} x_{2i+1}`` mod 2."""
    return parity(x & (x >> 1) & even_mask(genus))


@dataclass(frozen=True)
class QuadraticForm:
    """
    Quadratic form on ``F_2^{2g}`` refining the standard symplectic pairing.

    ``values`` holds ``q`` on the basis: bit ``i`` is ``q(basis_i)``.
    """

    genus: int
    values: int = 0

    def __call__(self, x: int) -> int:
        return parity(x & self.values) ^ cross_term(x, self.genus)

    @property
    def arf(self) -> int:
        return cross_term(self.values, self.genus)

    def arf_by_counting(self) -> int:
        """Majority value of ``q`` over all ``4^g`` classes."""
        ones = sum(self(x) for x in range(1 << (2 * self.genus)))
        return 1 if 2 * ones > 1 << (2 * self.genus) else 0

    @property
    def bits(self) -> list[int]:
        return [self.values >> i & 1 for i in range(2 * self.genus)]

    @classmethod
    def all(cls, genus: int):
        return [cls(genus, values) for values in range(1 << (2 * genus))]


def arf(form: QuadraticForm) -> int:
    return form.arf


@dataclass(frozen=True)
class BaseFit:
    orientation: Orientation
    form: QuadraticForm
    epsilon: int
    mode: str
    constraint_count: int


@dataclass(frozen=True)
class FamilyMember:
    form: QuadraticForm
    flips: EdgeSubset
    orientation: Orientation
    coefficient: Fraction

    @property
    def arf(self) -> int:
        return self.form.arf


@dataclass(frozen=True)
class PfaffianFamily:
    genus: int
    epsilon: int
    base: Orientation
    base_form: QuadraticForm
    members: tuple[FamilyMember, ...]
    certification: str

    @property
    def size(self) -> int:
        return len(self.members)

    def predicted_sign(self, form: QuadraticForm, x: int) -> int:
        return self.epsilon * (-1) ** form(x)

    def as_dict(self) -> dict:
        return {
            "genus": self.genus,
            "epsilon0": self.epsilon,
            "certified": self.certification,
            "base_form": self.base_form.bits,
            "arf_zero": sum(1 for member in self.members if member.arf == 0),
            "arf_one": sum(1 for member in self.members if member.arf == 1),
            "members": [
                {
                    "form": member.form.bits,
                    "arf": member.arf,
                    "alpha": str(member.coefficient),
                    "flips": list(iter_bits(member.flips)),
                }
                for member in self.members
            ],
        }


def matching_sign(graph: Multigraph, matching, orientation, ordering=None) -> int:
    """
    Sign of the Pfaffian term of ``matching`` under ``orientation``.

    Pairs are written ``(low, high)`` in ``ordering``; the result is the sign
    of the permutation listing them by ``low``, times ``-1`` per edge that
    runs from high to low.
    """
    bits = getattr(orientation, "bits", orientation)
    rank = list(range(graph.vertex_count)) if ordering is None else list(ordering)
    if len(matching) * 2 != graph.vertex_count:
        raise StructuralError("matching does not cover every vertex")
    pairs = []
    sign = 1
    seen = set()
    for edge in matching:
        u, v = graph.edges[edge]
        if u == v or u in seen or v in seen:
            raise StructuralError(f"edge {edge} breaks the matching")
        seen.update((u, v))
        tail, head = (v, u) if bits >> edge & 1 else (u, v)
        if rank[tail] > rank[head]:
            sign = -sign
        pairs.append(tuple(sorted((rank[u], rank[v]))))
    pairs.sort()
    permutation = [position for pair in pairs for position in pair]
    visited = [False] * len(permutation)
    for start in range(len(permutation)):
        if visited[start]:
            continue
        length = 0
        index = start
        while not visited[index]:
            visited[index] = True
            index = permutation[index]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def fit_signs(
    edge_count: int, homology: HomologyData, constraints, mode: str
) -> BaseFit:
    """
    Solve for flips ``s``, base form values ``u`` and ``eps_0`` so that
    ``sign(E') = eps_0 (-1)^{s(E') + q(h(E'))}`` for every constraint.

    ``constraints`` yields ``(subset, sign_bit)`` pairs over the first
    ``edge_count`` edges.
    """
    dimension = homology.dimension
    epsilon_var = edge_count + dimension
    constraints = list(constraints)
    equations = []
    for subset, bit in constraints:
        x = homology.class_of(subset)
        row = subset | (x << edge_count) | (1 << epsilon_var)
        equations.append((row, bit ^ cross_term(x, homology.genus)))
    try:
        solution = gf2.solve(equations, epsilon_var + 1)
    except gf2.InconsistentSystemError as exc:
        subset, bit = constraints[exc.index]
        raise InvariantViolation(
            f"sign constraint for edges {list(iter_bits(subset))} "
            f"(sign bit {bit}) is inconsistent"
        ) from exc
    flips = solution & ((1 << edge_count) - 1)
    values = solution >> edge_count & ((1 << dimension) - 1)
    epsilon = -1 if solution >> epsilon_var & 1 else 1
    return BaseFit(
        Orientation(flips), QuadraticForm(homology.genus, values), epsilon, mode,
        len(constraints),
    )


def quadratic_subsets(graph: Multigraph) -> list[EdgeSubset]:
    """Empty set, every basis cycle and every sum of two basis cycles."""
    cycles = cycle_basis(graph).cycles
    return [0, *cycles, *(a ^ b for a, b in combinations(cycles, 2))]


def fit_base(
    blowup: FisherBlowup, homology: HomologyData, mode: str = "quadratic", cap=None
) -> BaseFit:
    """Fit the base orientation of ``G^sigma`` from the matching signs under delta."""
    if mode not in MODES:
        raise InputError(f"unknown fitting mode {mode!r}")
    for edge in iter_bits(blowup.gadget_edges):
        if homology.edge_classes[edge]:
            raise InvariantViolation(f"gadget edge {edge} carries a homology class")

    source = blowup.source
    if mode == "exhaustive":
        subsets = even_subsets(source, cap)
    else:
        subsets = quadratic_subsets(source)
    seed = Orientation(blowup.delta)

    def constraints():
        for subset in subsets:
            matching = extend_even_to_matching(blowup, subset)
            yield subset, sign_bit(matching_sign(blowup.graph, matching, seed))

    fit = fit_signs(source.edge_count, homology, constraints(), mode)
    logger.debug(
        f"fitted base orientation from {fit.constraint_count} {mode} constraints, "
        f"eps0 = {fit.epsilon}"
    )
    return BaseFit(
        seed.flipped(fit.orientation.bits), fit.form, fit.epsilon, mode,
        fit.constraint_count,
    )


def build_family(
    base: BaseFit, homology: HomologyData, edge_count: int
) -> PfaffianFamily:
    """One orientation per quadratic form, weighted by ``eps_0 (-1)^Arf / 2^g``."""
    genus = homology.genus
    members = []
    for form in QuadraticForm.all(genus):
        difference = form.values ^ base.form.values
        flips = 0
        for edge in range(edge_count):
            if parity(difference & homology.edge_classes[edge]):
                flips |= 1 << edge
        members.append(
            FamilyMember(
                form,
                flips,
                base.orientation.flipped(flips),
                Fraction(base.epsilon * (-1) ** form.arf, 1 << genus),
            )
        )
    return PfaffianFamily(
        genus, base.epsilon, base.orientation, base.form, tuple(members), base.mode
    )


@dataclass(frozen=True)
class ArfReport:
    genus: int
    form_count: int
    arf_zero: int
    arf_one: int
    passed: bool
    witness: tuple | None = None

    def as_dict(self) -> dict:
        return {
            "genus": self.genus,
            "forms": self.form_count,
            "arf_zero": self.arf_zero,
            "arf_one": self.arf_one,
            "passed": self.passed,
            "witness": list(self.witness) if self.witness else None,
        }


def arf_identities(genus: int, limit: int = 3) -> ArfReport:
    """
    Check, over all quadratic forms of the given genus, that
    ``2^{-g} sum_q (-1)^{Arf q + q(x)} = 1`` for every class ``x``, that the
    sign matrix ``(-1)^{q(x)}`` has orthogonal columns, and that the closed
    form of Arf agrees with the majority count.
    """
    if genus > limit:
        raise CapacityError(f"genus {genus} exceeds the Arf check limit {limit}")
    forms = QuadraticForm.all(genus)
    size = len(forms)
    signs = np.array([[(-1) ** q(x) for x in range(size)] for q in forms], dtype=np.int64)
    arfs = np.array([(-1) ** q.arf for q in forms], dtype=np.int64)

    witness = None
    totals = arfs @ signs
    for x, total in enumerate(totals):
        if total != 1 << genus:
            witness = ("sum", x, int(total))
            break
    if witness is None and not np.array_equal(signs.T @ signs, size * np.eye(size, dtype=np.int64)):
        witness = ("orthogonality",)
    if witness is None:
        for q in forms:
            if q.arf != q.arf_by_counting():
                witness = ("arf", q.values)
                break
    zero = sum(1 for q in forms if q.arf == 0)
    return ArfReport(genus, size, zero, size - zero, witness is None, witness)
