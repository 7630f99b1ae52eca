from django_ising_pfaffian.operations import genus_payload

from ._base import GraphCommand


class Command(GraphCommand):
    help = "Print the genus, face count and component count of an embedded graph"

    def run(self, graph, rotation, **options):
        return genus_payload(graph, rotation)
