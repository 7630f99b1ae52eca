import json
import logging

from django.core.management.base import BaseCommand, CommandError

from django_ising_pfaffian.exceptions import IsingPfaffianError, exit_code_for
from django_ising_pfaffian.fixtures import load_fixture
from django_ising_pfaffian.graphfile import read_graph_file, read_weights

logger = logging.getLogger(__name__)


class GraphCommand(BaseCommand):
    """
    Base for commands that read one embedded graph and print a JSON report.

    Subclasses implement ``run(graph, rotation, **options)`` and return the
    payload. Solver errors become ``CommandError`` with the matching exit code.
    """

    timing = False
    weights = False
    # option strings of the weights file flag, first one shown in help
    weight_flags = ("--weights",)

    def add_arguments(self, parser):
        parser.add_argument(
            "path", nargs="?", metavar="graph", help="Path to a graph file"
        )
        parser.add_argument("--fixture", help="Use a named fixture instead of a file")
        if self.timing:
            parser.add_argument(
                "--no-timing",
                action="store_true",
                help="Leave the timing block out of the report",
            )
        if self.weights:
            source = parser.add_mutually_exclusive_group(required=True)
            source.add_argument(
                *self.weight_flags,
                dest="weights",
                help="JSON file mapping edge ids to values",
            )
            source.add_argument("--all-ones", action="store_true", help="Weight 1 on every edge")
            source.add_argument(
                "--random",
                "--seed",
                dest="random",
                type=int,
                metavar="SEED",
                help="Random rational weights drawn with this seed",
            )
            parser.add_argument(
                "--float", action="store_true", help="Evaluate in float64 instead of exact rationals"
            )

    def load(self, options):
        if bool(options.get("path")) == bool(options.get("fixture")):
            raise CommandError("give a graph file or --fixture (not both)", returncode=2)
        if options.get("fixture"):
            return load_fixture(options["fixture"])
        return read_graph_file(options["path"])

    def weight_options(self, graph, options):
        weights = None
        if options.get("weights"):
            weights = read_weights(options["weights"], graph.edge_count)
        return {
            "weights": weights,
            "all_ones": options.get("all_ones", False),
            "seed": options.get("random"),
            "use_float": options.get("float", False),
        }

    def emit(self, payload):
        self.stdout.write(json.dumps(payload, indent=2, sort_keys=True))

    def handle(self, *args, **options):
        try:
            graph, rotation = self.load(options)
            payload = self.run(graph, rotation, **options)
        except IsingPfaffianError as exc:
            logger.warning(f"{type(exc).__name__}: {exc}")
            raise CommandError(str(exc), returncode=exit_code_for(exc)) from exc
        self.emit(payload)
        return self.after(payload)

    def after(self, payload):
        return None

    def run(self, graph, rotation, **options):
        raise NotImplementedError
