from django_ising_pfaffian.operations import ising_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Compute the Ising partition function for edge couplings x_e"

    weights = True
    weight_flags = ("--x", "--weights")

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--mode", choices=["quadratic", "exhaustive"])

    def run(self, graph, rotation, **options):
        return ising_payload(
            graph,
            rotation,
            mode=options.get("mode"),
            **self.weight_options(graph, options),
        )
