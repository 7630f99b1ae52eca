"""
Evaluation of the even-subgraph polynomial, the Ising partition function and
the perfect matching polynomial as signed sums of ``4^g`` Pfaffians.

A solver prepares each connected component once (blow-up, homology, fitted
family) and can then be evaluated on any number of weight assignments.
Results of disconnected graphs are products over components.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np
import sympy

from .conf import get_setting
from .exceptions import (
    CapacityError,
    DomainError,
    InputError,
    InvariantViolation,
)
from .fisher import FisherBlowup, extend_even_to_matching, with_rotation
from .gf2 import EchelonBasis, iter_bits
from .graph import (
    Component,
    Multigraph,
    cycle_basis,
    edge_subset,
    even_poly_oracle,
    matching_oracle,
    perfect_matchings,
)
from .pfaffian import (
    WeightAssignment,
    pfaffian,
    projected_pfaffian,
    skew_adjacency,
)
from .signfit import (
    MODES,
    Orientation,
    PfaffianFamily,
    build_family,
    fit_base,
    fit_signs,
    matching_sign,
    sign_bit,
)
from .surface import (
    HomologyData,
    RotationSystem,
    homology_data,
    minimum_genus_rotation,
    trace_faces,
)

logger = logging.getLogger(__name__)


@contextmanager
def timed(timings: dict, phase: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        timings[phase] = timings.get(phase, 0.0) + time.perf_counter() - start


@dataclass
class EvaluationReport:
    value: object
    genus: int
    family_size: int
    epsilon0: int
    certified: str
    timings: dict = field(default_factory=dict)
    note: str | None = None

    def as_dict(self, include_timing: bool = True) -> dict:
        payload = {
            "value": str(self.value),
            "genus": self.genus,
            "family_size": self.family_size,
            "epsilon0": self.epsilon0,
            "certified": self.certified,
        }
        if self.note:
            payload["note"] = self.note
        if include_timing:
            payload["timing"] = {k: round(v, 6) for k, v in self.timings.items()}
        return payload


@dataclass(frozen=True)
class ComponentPlan:
    component: Component
    family: PfaffianFamily | None
    blowup: FisherBlowup | None = None
    homology: HomologyData | None = None


def _resolve_mode(mode):
    mode = get_setting("default_mode") if mode is None else mode
    if mode not in MODES:
        raise InputError(f"unknown fitting mode {mode!r}, expected one of {MODES}")
    return mode


def _reduce(values, one):
    total = one - one
    for value in values:
        total += value
    return total


class _FamilySolver:
    """Shared bookkeeping for solvers that evaluate a family per component."""

    plans: tuple[ComponentPlan, ...]
    certified: str

    def __init__(self, graph: Multigraph, rotation: RotationSystem, jobs=None):
        self.graph = graph
        self.rotation = rotation
        self.jobs = get_setting("jobs") if jobs is None else jobs
        self.timings: dict[str, float] = {}
        with timed(self.timings, "faces"):
            self.faces = trace_faces(graph, rotation)

    @property
    def genus(self) -> int:
        return self.faces.genus

    @property
    def family_size(self) -> int:
        return prod(plan.family.size for plan in self.plans if plan.family)

    @property
    def epsilon0(self) -> int:
        return prod(plan.family.epsilon for plan in self.plans if plan.family)

    def _members(self, plan, weights, pfaffian_of):
        def term(member):
            coefficient = member.coefficient
            if not weights.is_exact:
                coefficient = float(coefficient)
            value = pfaffian_of(member.orientation)
            logger.debug(f"form {member.form.bits}: Pfaffian {value}")
            return coefficient * value

        if self.jobs > 1 and plan.family.size > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                terms = list(pool.map(term, plan.family.members))
        else:
            terms = [term(member) for member in plan.family.members]
        return _reduce(terms, weights.one)

    def report(self, weights: WeightAssignment, note=None) -> EvaluationReport:
        value = self.evaluate(weights)
        return EvaluationReport(
            value,
            self.genus,
            self.family_size,
            self.epsilon0,
            self.certified,
            dict(self.timings),
            note,
        )


class EvenPolynomialSolver(_FamilySolver):
    """
    ``E_G(w) = sum_q alpha_q Pf(A_{D_q}(G^sigma, w))`` for an embedded graph.

    ``family_hook`` may replace each fitted family before use; the
    verification suite uses it to inject corrupted families.
    """

    def __init__(self, graph, rotation, mode=None, jobs=None, family_hook=None):
        super().__init__(graph, rotation, jobs)
        self.certified = _resolve_mode(mode)
        plans = []
        for component in graph.components:
            if component.graph.edge_count == 0:
                plans.append(ComponentPlan(component, None))
                continue
            local = rotation.restrict(component)
            with timed(self.timings, "blowup"):
                blowup = with_rotation(component.graph, local)
            with timed(self.timings, "homology"):
                homology = homology_data(
                    blowup.graph, blowup.rotation, blowup.gadget_path_edges
                )
            with timed(self.timings, "fit"):
                base = fit_base(blowup, homology, self.certified)
                family = build_family(base, homology, component.graph.edge_count)
            if family_hook is not None:
                family = family_hook(family)
            plans.append(ComponentPlan(component, family, blowup, homology))
        self.plans = tuple(plans)
        logger.info(
            f"prepared {len(plans)} component(s), genus {self.genus}, "
            f"family size {self.family_size}"
        )

    def evaluate(self, weights: WeightAssignment):
        if len(weights) != self.graph.edge_count:
            raise InputError(
                f"{len(weights)} weights given for {self.graph.edge_count} edges"
            )
        result = weights.one
        with timed(self.timings, "pfaffian"):
            for plan in self.plans:
                if plan.family is None:
                    continue
                local = weights.select(plan.component.edges)
                result *= self._members(
                    plan,
                    local,
                    lambda orientation, plan=plan, local=local: projected_pfaffian(
                        plan.blowup, orientation, local
                    ),
                )
        return result


class MatchingPolynomialSolver(_FamilySolver):
    """
    Perfect matching polynomial of an embedded graph, fitted directly on its
    own matchings (no blow-up).
    """

    def __init__(self, graph, rotation, cap=None, jobs=None):
        super().__init__(graph, rotation, jobs)
        self.certified = "exhaustive"
        self.note = None
        plans = []
        for component in graph.components:
            local_graph = component.graph
            with timed(self.timings, "matchings"):
                matchings = list(perfect_matchings(local_graph, cap))
            if not matchings:
                self.note = f"component at vertex {component.vertices[0]} has no perfect matching"
                plans.append(ComponentPlan(component, None))
                continue
            with timed(self.timings, "homology"):
                homology = homology_data(local_graph, rotation.restrict(component))
            with timed(self.timings, "fit"):
                constraints = [
                    (
                        edge_subset(matching),
                        sign_bit(matching_sign(local_graph, matching, Orientation())),
                    )
                    for matching in matchings
                ]
                base = fit_signs(
                    local_graph.edge_count, homology, constraints, self.certified
                )
                family = build_family(base, homology, local_graph.edge_count)
            plans.append(ComponentPlan(component, family, None, homology))
        self.plans = tuple(plans)

    @property
    def family_size(self) -> int:
        return 0 if self.note else super().family_size

    def evaluate(self, weights: WeightAssignment):
        if len(weights) != self.graph.edge_count:
            raise InputError(
                f"{len(weights)} weights given for {self.graph.edge_count} edges"
            )
        if self.note:
            return weights.zero
        result = weights.one
        with timed(self.timings, "pfaffian"):
            for plan in self.plans:
                local = weights.select(plan.component.edges)
                graph = plan.component.graph
                result *= self._members(
                    plan,
                    local,
                    lambda orientation, graph=graph, local=local: pfaffian(
                        skew_adjacency(graph, orientation, local)
                    ),
                )
        return result

    def report(self, weights, note=None):
        return super().report(weights, note or self.note)


def even_poly(graph, rotation, weights, mode=None, jobs=None) -> EvaluationReport:
    solver = EvenPolynomialSolver(graph, rotation, mode, jobs)
    return solver.report(weights)


def matching_poly(graph, rotation, weights, cap=None, jobs=None) -> EvaluationReport:
    solver = MatchingPolynomialSolver(graph, rotation, cap, jobs)
    return solver.report(weights)


def ising_weights(x: WeightAssignment) -> WeightAssignment:
    """Edge variables ``z_e = (x_e^2 - 1) / (x_e^2 + 1)``."""
    for edge, value in enumerate(x.values):
        if value == 0:
            raise DomainError(f"coupling of edge {edge} is zero")
    return WeightAssignment(
        tuple((v * v - 1) / (v * v + 1) for v in x.values), x.domain
    )


def ising_prefactor(graph: Multigraph, x: WeightAssignment):
    factor = x.one * 2**graph.vertex_count
    for value in x.values:
        factor *= (value + 1 / value) / 2
    return factor


def ising_partition(
    graph, rotation, x: WeightAssignment, mode=None, solver=None
):
    """``Z = 2^n prod_e (x_e + 1/x_e)/2 * E_G(z)``."""
    z = ising_weights(x)
    solver = solver or EvenPolynomialSolver(graph, rotation, mode)
    return ising_prefactor(graph, x) * solver.evaluate(z)


def spin_sum_oracle(graph: Multigraph, x: WeightAssignment, cap=None):
    """Brute-force ``sum over spins of prod_e x_e^{s_u s_v}``."""
    cap = get_setting("spin_vertex_cap") if cap is None else cap
    n = graph.vertex_count
    if n > cap:
        raise CapacityError(
            f"spin sum over {n} vertices exceeds the cap of {cap}",
            required=n,
            cap=cap,
        )
    for edge, value in enumerate(x.values):
        if value == 0:
            raise DomainError(f"coupling of edge {edge} is zero")
    if n == 0:
        return x.one

    # Global spin flip is a symmetry: fix the spin of vertex 0.
    if x.is_exact:
        agree = [v.numerator**2 for v in x.values]
        disagree = [v.denominator**2 for v in x.values]
        scale = prod(v.numerator * v.denominator for v in x.values)
    else:
        agree = list(x.values)
        disagree = [1 / v for v in x.values]
        scale = 1
    total = 0
    for spins in range(1 << (n - 1)):
        spins <<= 1
        term = 1
        for edge, (u, v) in enumerate(graph.edges):
            same = (spins >> u & 1) == (spins >> v & 1)
            term *= agree[edge] if same else disagree[edge]
        total += term
    if x.is_exact:
        return Fraction(2 * total, scale)
    return 2 * total


def symbolic_even_poly(graph, rotation, mode=None, cap=None):
    """
    Monomial expansion of ``E_G`` recovered by evaluating on 0/1 weights and
    inverting over the subset lattice. Returns ``(subset, coefficient)`` pairs.
    """
    cap = get_setting("symbolic_edge_cap") if cap is None else cap
    m = graph.edge_count
    if m > cap:
        raise CapacityError(
            f"{m} edges exceed the symbolic expansion cap of {cap}", required=m, cap=cap
        )
    solver = EvenPolynomialSolver(graph, rotation, mode)
    values = [
        solver.evaluate(WeightAssignment(tuple((mask >> e) & 1 for e in range(m))))
        for mask in range(1 << m)
    ]
    for bit in range(m):
        for mask in range(1 << m):
            if mask >> bit & 1:
                values[mask] -= values[mask ^ (1 << bit)]

    terms = []
    for mask, coefficient in enumerate(values):
        if coefficient not in (0, 1):
            raise InvariantViolation(f"monomial {mask:b} has coefficient {coefficient}")
        if graph.is_even(mask) != (coefficient == 1):
            raise InvariantViolation(
                f"monomial {list(iter_bits(mask))} disagrees with evenness"
            )
        if coefficient:
            terms.append((mask, int(coefficient)))
    return terms


@dataclass
class VerificationReport:
    trials: int
    passed: int
    genus: int
    family_size: int
    epsilon0: int
    certified: str
    failures: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self, include_timing=True) -> dict:
        payload = {
            "trials": self.trials,
            "passed": self.passed,
            "genus": self.genus,
            "family_size": self.family_size,
            "epsilon0": self.epsilon0,
            "certified": self.certified,
            "failures": self.failures,
        }
        if self.notes:
            payload["notes"] = self.notes
        if include_timing:
            payload["timing"] = {k: round(v, 6) for k, v in self.timings.items()}
        return payload


def _agrees(formula, oracle, weights):
    if weights.is_exact:
        return formula == oracle
    return bool(np.isclose(formula, oracle, rtol=get_setting("float_rtol"), atol=0.0))


def verify(
    graph,
    rotation,
    trials=10,
    seed=0,
    mode=None,
    check_matchings=True,
    check_ising=True,
    family_hook=None,
) -> VerificationReport:
    """Compare the formulas against the brute-force oracles on random weights."""
    rng = np.random.default_rng(seed)
    weight_range = tuple(get_setting("weight_range"))
    solver = EvenPolynomialSolver(graph, rotation, mode, family_hook=family_hook)
    matchings = None
    notes = []
    if check_matchings:
        try:
            matchings = MatchingPolynomialSolver(graph, rotation)
        except CapacityError as exc:
            logger.info(f"skipping the matching check: {exc}")
            notes.append(f"matching check skipped: {exc}")
    if check_ising and graph.vertex_count > get_setting("spin_vertex_cap"):
        notes.append(
            f"ising check skipped: {graph.vertex_count} vertices exceed the spin-sum cap"
        )
        check_ising = False

    report = VerificationReport(
        trials,
        0,
        solver.genus,
        solver.family_size,
        solver.epsilon0,
        solver.certified,
        notes=notes,
    )
    for trial in range(trials):
        weights = WeightAssignment.random(graph.edge_count, rng, weight_range)
        checks = [("even", solver.evaluate(weights), even_poly_oracle(graph, weights))]
        if matchings is not None:
            checks.append(
                ("matching", matchings.evaluate(weights), matching_oracle(graph, weights))
            )
        if check_ising:
            checks.append(
                (
                    "ising",
                    ising_partition(graph, rotation, weights, solver=solver),
                    spin_sum_oracle(graph, weights),
                )
            )
        mismatches = [
            {
                "trial": trial,
                "check": name,
                "formula": str(formula),
                "oracle": str(oracle),
                "weights": weights.as_dict(),
            }
            for name, formula, oracle in checks
            if not _agrees(formula, oracle, weights)
        ]
        if mismatches:
            logger.warning(f"verification trial {trial} failed: {mismatches[0]}")
            report.failures.extend(mismatches)
        else:
            report.passed += 1
    report.timings = dict(solver.timings)
    return report


@dataclass
class OptimalityReport:
    genus: int
    rank: int
    lower_bound: int
    family_size: int
    orthogonal: bool
    signs_certified: bool
    minimal_rotation: bool | None = None
    timings: dict = field(default_factory=dict)

    @property
    def attained(self) -> bool:
        return self.rank == self.lower_bound == self.family_size

    def as_dict(self, include_timing=True) -> dict:
        payload = {
            "genus": self.genus,
            "rank": self.rank,
            "lower_bound": self.lower_bound,
            "family_size": self.family_size,
            "attained": self.attained,
            "orthogonal": self.orthogonal,
            "signs_certified": self.signs_certified,
            "minimal_rotation": self.minimal_rotation,
            "ising_complexity": self.lower_bound if self.minimal_rotation else None,
        }
        if include_timing:
            payload["timing"] = {k: round(v, 6) for k, v in self.timings.items()}
        return payload


def class_representatives(graph: Multigraph, homology: HomologyData) -> list[int]:
    """
    For every class ``x`` in ``F_2^{2g}`` an even subset of ``graph`` whose
    class is ``x``, built from combinations of fundamental cycles.
    """
    cycles = cycle_basis(graph).cycles
    basis = EchelonBasis()
    for index, cycle in enumerate(cycles):
        basis.add(homology.class_of(cycle), 1 << index)
    if basis.rank != homology.dimension:
        raise InvariantViolation(
            f"cycles reach a rank {basis.rank} subspace of homology, "
            f"expected {homology.dimension}"
        )
    generators = []
    for vector, tag in basis.rows():
        subset = 0
        for index in iter_bits(tag):
            subset ^= cycles[index]
        generators.append((vector, subset))

    representatives = []
    for x in range(1 << homology.dimension):
        subset = 0
        for i in iter_bits(x):
            subset ^= generators[i][1]
        if homology.class_of(subset) != x:
            raise InvariantViolation(f"representative of class {x:b} has the wrong class")
        representatives.append(subset)
    return representatives


def optimality_certificate(
    graph, rotation, mode=None, search_minimum=False, limit=None
) -> OptimalityReport:
    """
    Show that no signed sum of fewer than ``4^g`` Pfaffians reproduces
    ``E_G`` for this embedding: the sign matrix ``eps_0 (-1)^{q(x)}`` between
    the family and one even subset per homology class has full rank.
    """
    solver = EvenPolynomialSolver(graph, rotation, mode)
    rank_total, bound_total = 1, 1
    orthogonal, certified = True, True
    with timed(solver.timings, "certificate"):
        for plan in solver.plans:
            if plan.family is None:
                continue
            blowup, homology, family = plan.blowup, plan.homology, plan.family
            representatives = class_representatives(blowup.source, homology)
            size = len(representatives)
            matrix = np.array(
                [
                    [family.predicted_sign(member.form, x) for x in range(size)]
                    for member in family.members
                ],
                dtype=np.int64,
            )
            for row, member in enumerate(family.members):
                for x, subset in enumerate(representatives):
                    matching = extend_even_to_matching(blowup, subset)
                    actual = matching_sign(blowup.graph, matching, member.orientation)
                    if actual != matrix[row, x]:
                        certified = False
            gram = matrix.T @ matrix
            orthogonal &= bool(np.array_equal(gram, size * np.eye(size, dtype=np.int64)))
            rank_total *= int(sympy.Matrix(matrix.tolist()).rank())
            bound_total *= size

    minimal = None
    if search_minimum:
        with timed(solver.timings, "search"):
            _, best = minimum_genus_rotation(graph, limit)
        minimal = best == solver.genus
    return OptimalityReport(
        solver.genus,
        rank_total,
        bound_total,
        solver.family_size,
        orthogonal,
        certified,
        minimal,
        dict(solver.timings),
    )
