from django_ising_pfaffian.operations import optimality_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Certify that 4^g Pfaffians are necessary for this embedding"

    timing = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--mode", choices=["quadratic", "exhaustive"])
        parser.add_argument(
            "--certify-minimum",
            action="store_true",
            help="Also search all rotation systems to confirm the genus is minimal",
        )

    def run(self, graph, rotation, **options):
        return optimality_payload(
            graph,
            rotation,
            mode=options.get("mode"),
            certify_minimum=options["certify_minimum"],
            timing=not options["no_timing"],
        )
