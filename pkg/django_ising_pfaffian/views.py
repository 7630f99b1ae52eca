import json
import logging

from django.contrib.auth.decorators import login_required
from django.http import JsonResponse
from django.views.decorators.http import require_http_methods

from .exceptions import IsingPfaffianError, http_status_for
from .graphfile import parse_graph_file
from .operations import run_operation

logger = logging.getLogger(__name__)

WEIGHTED = {"evenpoly", "matchpoly", "ising"}


def _options(operation, data):
    options = {}
    if operation in WEIGHTED:
        options.update(
            weights=data.get("weights"),
            all_ones=bool(data.get("all_ones", False)),
            seed=data.get("seed"),
            use_float=bool(data.get("float", False)),
        )
    if operation in {"evenpoly", "ising", "verify", "optimality", "family"}:
        options["mode"] = data.get("mode")
    if operation in {"evenpoly", "matchpoly", "verify", "optimality"}:
        options["timing"] = bool(data.get("timing", True))
    if operation == "verify":
        options["trials"] = int(data.get("trials", 10))
        options["seed"] = int(data.get("seed", 0))
        options["check_matchings"] = bool(data.get("check_matchings", True))
    if operation == "optimality":
        options["certify_minimum"] = bool(data.get("certify_minimum", False))
    return options


@require_http_methods(["POST"])
@login_required
def evaluate(request):
    """
    Run one solver operation on a graph posted as JSON

    Expects JSON body with:
    - graph: str (graph file text, with R lines for embedded operations)
    - operation: str (genus, evenpoly, matchpoly, ising, verify, optimality,
      family; default evenpoly)
    - weights: dict (optional, edge id -> value) or all_ones / seed
    - mode, float, trials, seed, certify_minimum: per operation

    Returns JSON with success and the operation's report fields, or error.
    """
    try:
        data = json.loads(request.body)
    except (json.JSONDecodeError, UnicodeDecodeError):
        return JsonResponse(
            {"success": False, "error": "Invalid JSON in request body"}, status=400
        )

    operation = data.get("operation", "evenpoly")
    try:
        graph, rotation = parse_graph_file(data.get("graph", ""))
        payload = run_operation(operation, graph, rotation, **_options(operation, data))
        return JsonResponse({"success": True, "operation": operation, **payload})

    except IsingPfaffianError as e:
        return JsonResponse(
            {"success": False, "error": str(e)}, status=http_status_for(e)
        )

    except (TypeError, ValueError) as e:
        return JsonResponse({"success": False, "error": str(e)}, status=400)

    except Exception as e:
        logger.error(f"evaluate failed for {operation}: {e}", exc_info=True)
        return JsonResponse({"success": False, "error": str(e)}, status=500)
