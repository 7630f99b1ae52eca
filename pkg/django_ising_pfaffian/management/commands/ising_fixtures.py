from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from django_ising_pfaffian.exceptions import IsingPfaffianError, exit_code_for
from django_ising_pfaffian.fixtures import FIXTURES
from django_ising_pfaffian.graph import cycle_basis, perfect_matchings
from django_ising_pfaffian.graphfile import serialize_graph_file
from django_ising_pfaffian.surface import trace_faces


class Command(BaseCommand):
    help = "List, write out or check the built-in example embeddings"

    def add_arguments(self, parser):
        parser.add_argument("names", nargs="*", help="Fixtures to act on (default: all)")
        parser.add_argument("--write", metavar="DIR", help="Write <name>.graph files to DIR")
        parser.add_argument(
            "--check",
            action="store_true",
            help="Recompute genus, faces and counts and compare with the pinned values",
        )

    def handle(self, *args, **options):
        names = options["names"] or list(FIXTURES)
        unknown = [name for name in names if name not in FIXTURES]
        if unknown:
            raise CommandError(f"Unknown fixtures: {', '.join(unknown)}", returncode=2)

        if options["write"]:
            directory = Path(options["write"])
            directory.mkdir(parents=True, exist_ok=True)
            for name in names:
                graph, rotation = FIXTURES[name].build()
                path = directory / f"{name}.graph"
                path.write_text(serialize_graph_file(graph, rotation), encoding="utf-8")
                self.stdout.write(f"Wrote {path}")

        if not options["check"]:
            if not options["write"]:
                for name in names:
                    self.stdout.write(f"{name}: {FIXTURES[name].description}")
            return

        failures = 0
        for name in names:
            try:
                mismatches = self.check(FIXTURES[name])
            except IsingPfaffianError as exc:
                raise CommandError(f"{name}: {exc}", returncode=exit_code_for(exc)) from exc
            if mismatches:
                failures += 1
                self.stdout.write(self.style.WARNING(f"{name}: {'; '.join(mismatches)}"))
            else:
                self.stdout.write(self.style.SUCCESS(f"{name}: ok"))
        if failures:
            raise CommandError(f"{failures} fixture(s) disagree with their pins", returncode=1)

    def check(self, fixture):
        graph, rotation = fixture.build()
        faces = trace_faces(graph, rotation)
        actual = {
            "genus": faces.genus,
            "faces": faces.face_count,
            "components": faces.component_count,
        }
        if fixture.expected.get("even_subsets") is not None:
            actual["even_subsets"] = 2 ** cycle_basis(graph).rank
        if fixture.expected.get("perfect_matchings") is not None:
            actual["perfect_matchings"] = sum(1 for _ in perfect_matchings(graph))
        return [
            f"{key} is {value}, expected {fixture.expected[key]}"
            for key, value in actual.items()
            if fixture.expected.get(key) is not None and value != fixture.expected[key]
        ]
