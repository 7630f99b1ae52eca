from django.core.management.base import CommandError

from django_ising_pfaffian.operations import verify_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Check the Pfaffian formulas against brute-force oracles on random weights"

    timing = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--trials", type=int, default=10)
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--mode", choices=["quadratic", "exhaustive"])
        parser.add_argument(
            "--skip-matchings",
            action="store_true",
            help="Leave out the perfect matching polynomial check",
        )

    def run(self, graph, rotation, **options):
        return verify_payload(
            graph,
            rotation,
            trials=options["trials"],
            seed=options["seed"],
            mode=options.get("mode"),
            check_matchings=not options["skip_matchings"],
            timing=not options["no_timing"],
        )

    def after(self, payload):
        if payload["failures"]:
            raise CommandError(
                f"{len(payload['failures'])} check(s) disagreed with the oracles",
                returncode=1,
            )
        self.stderr.write(
            self.style.SUCCESS(f"{payload['passed']}/{payload['trials']} trials passed")
        )
