import json

from django_ising_pfaffian.operations import family_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Export the fitted Pfaffian family (orientations and coefficients) as JSON"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--mode", choices=["quadratic", "exhaustive"])
        parser.add_argument("--out", help="Write the family to this file")

    def run(self, graph, rotation, **options):
        self.out = options.get("out")
        return family_payload(graph, rotation, mode=options.get("mode"))

    def emit(self, payload):
        if not self.out:
            return super().emit(payload)
        with open(self.out, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
        self.stdout.write(self.style.SUCCESS(f"Wrote family to {self.out}"))
