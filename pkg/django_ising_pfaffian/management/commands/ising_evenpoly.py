from django_ising_pfaffian.operations import evenpoly_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Evaluate the even-subgraph polynomial as a signed sum of Pfaffians"

    timing = True
    weights = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--mode",
            choices=["quadratic", "exhaustive"],
            help="How many even subsets the sign fit uses",
        )
        parser.add_argument(
            "--jobs", type=int, help="Evaluate family members on this many threads"
        )
        parser.add_argument(
            "--compare",
            action="store_true",
            help="With --float, also evaluate exactly and report the relative deviation",
        )

    def run(self, graph, rotation, **options):
        return evenpoly_payload(
            graph,
            rotation,
            mode=options.get("mode"),
            jobs=options.get("jobs"),
            timing=not options["no_timing"],
            compare=options["compare"],
            **self.weight_options(graph, options),
        )
