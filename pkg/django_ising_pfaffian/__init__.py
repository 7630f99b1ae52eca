"""
Django Ising Pfaffian - exact even-subgraph, Ising and perfect matching
polynomials of graphs embedded on orientable surfaces
"""

__version__ = "0.1.0"

default_app_config = "django_ising_pfaffian.apps.DjangoIsingPfaffianConfig"

# Expose main components for easy import
from .engine import (
    EvenPolynomialSolver,
    MatchingPolynomialSolver,
    even_poly,
    ising_partition,
    matching_poly,
)
from .graph import Multigraph
from .pfaffian import WeightAssignment
from .surface import RotationSystem

__all__ = [
    "EvenPolynomialSolver",
    "MatchingPolynomialSolver",
    "Multigraph",
    "RotationSystem",
    "WeightAssignment",
    "even_poly",
    "ising_partition",
    "matching_poly",
]
