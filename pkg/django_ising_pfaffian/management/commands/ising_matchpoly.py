from django_ising_pfaffian.operations import matchpoly_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Evaluate the perfect matching polynomial of an embedded graph"

    timing = True
    weights = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--jobs", type=int)

    def run(self, graph, rotation, **options):
        return matchpoly_payload(
            graph,
            rotation,
            jobs=options.get("jobs"),
            timing=not options["no_timing"],
            **self.weight_options(graph, options),
        )
