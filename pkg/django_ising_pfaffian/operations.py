"""
JSON payload builders shared by the management commands and the HTTP view.

Each ``*_payload`` function takes a parsed graph and rotation plus keyword
options and returns a JSON-serialisable dict.
"""

from __future__ import annotations

import logging

import numpy as np

from .conf import get_setting
from .engine import (
    EvenPolynomialSolver,
    MatchingPolynomialSolver,
    ising_partition,
    optimality_certificate,
    verify,
)
from .exceptions import InputError
from .graphfile import parse_weights
from .pfaffian import EXACT, FLOAT, WeightAssignment
from .surface import trace_faces

logger = logging.getLogger(__name__)


def require_rotation(rotation):
    if rotation is None:
        raise InputError("this operation needs a rotation system (R lines)")
    return rotation


def resolve_weights(graph, weights=None, all_ones=False, seed=None, use_float=False):
    """
    Weights from a JSON mapping (or an already parsed assignment), all ones,
    or random positive rationals drawn with ``seed``. Exactly one source must
    be given.
    """
    if sum((weights is not None, bool(all_ones), seed is not None)) != 1:
        raise InputError("give exactly one of weights, all-ones or a random seed")
    domain = FLOAT if use_float else EXACT
    if isinstance(weights, WeightAssignment):
        if len(weights) != graph.edge_count:
            raise InputError(
                f"expected {graph.edge_count} weights, got {len(weights)}"
            )
        return weights.to_float() if use_float else weights
    if weights is not None:
        return parse_weights(weights, graph.edge_count, domain)
    if all_ones:
        return WeightAssignment.ones(graph.edge_count, domain)
    rng = np.random.default_rng(seed)
    drawn = WeightAssignment.random(graph.edge_count, rng, tuple(get_setting("weight_range")))
    return drawn.to_float() if use_float else drawn


def genus_payload(graph, rotation, **options):
    faces = trace_faces(graph, require_rotation(rotation))
    return {
        "genus": faces.genus,
        "faces": faces.face_count,
        "components": faces.component_count,
    }


def evenpoly_payload(
    graph, rotation, mode=None, jobs=None, timing=True, compare=False, **options
):
    """
    With ``compare`` and float weights, also evaluate exactly and report the
    relative deviation of the float value.
    """
    use_float = options.pop("use_float", False)
    exact = resolve_weights(graph, **options)
    weights = exact.to_float() if use_float else exact
    solver = EvenPolynomialSolver(graph, require_rotation(rotation), mode, jobs)
    payload = solver.report(weights).as_dict(include_timing=timing)
    if compare and use_float:
        reference = solver.evaluate(exact)
        value = float(payload["value"])
        payload["exact_value"] = str(reference)
        payload["relative_deviation"] = (
            abs(value - float(reference)) / abs(float(reference)) if reference else abs(value)
        )
    return payload


def matchpoly_payload(graph, rotation, jobs=None, timing=True, **options):
    weights = resolve_weights(graph, **options)
    solver = MatchingPolynomialSolver(graph, require_rotation(rotation), jobs=jobs)
    return solver.report(weights).as_dict(include_timing=timing)


def ising_payload(graph, rotation, mode=None, timing=True, **options):
    x = resolve_weights(graph, **options)
    value = ising_partition(graph, require_rotation(rotation), x, mode)
    return {"value": str(value)}


def verify_payload(
    graph, rotation, trials=10, seed=0, mode=None, check_matchings=True, timing=True,
    **options,
):
    report = verify(
        graph,
        require_rotation(rotation),
        trials=trials,
        seed=seed,
        mode=mode,
        check_matchings=check_matchings,
    )
    return report.as_dict(include_timing=timing)


def optimality_payload(
    graph, rotation, mode=None, certify_minimum=False, timing=True, **options
):
    report = optimality_certificate(
        graph, require_rotation(rotation), mode, search_minimum=certify_minimum
    )
    return report.as_dict(include_timing=timing)


def family_payload(graph, rotation, mode=None, **options):
    solver = EvenPolynomialSolver(graph, require_rotation(rotation), mode)
    families = [
        {"vertices": list(plan.component.vertices), **plan.family.as_dict()}
        for plan in solver.plans
        if plan.family is not None
    ]
    if len(families) == 1:
        return families[0]
    return {"components": families}


OPERATIONS = {
    "genus": genus_payload,
    "evenpoly": evenpoly_payload,
    "matchpoly": matchpoly_payload,
    "ising": ising_payload,
    "verify": verify_payload,
    "optimality": optimality_payload,
    "family": family_payload,
}


def run_operation(name, graph, rotation, **options):
    try:
        operation = OPERATIONS[name]
    except KeyError:
        raise InputError(
            f"unknown operation {name!r}, choose from {sorted(OPERATIONS)}"
        ) from None
    logger.info(f"running {name} on {graph.vertex_count} vertices, {graph.edge_count} edges")
    return operation(graph, rotation, **options)
