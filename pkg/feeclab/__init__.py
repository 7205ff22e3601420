"""feeclab - variational crimes in finite element exterior calculus, from abstract Hilbert
complexes to de Rham complexes on lifted surface meshes."""

from feeclab.core.exceptions import (
    ComplexError,
    FeecLabError,
    MorphismError,
    NeighborhoodError,
    SolverError,
    ValidationError,
)
from feeclab.core.models import ComplexRep, MixedSolution
from feeclab.core.solvers import solve_hodge_eigen, solve_mixed_hodge
from feeclab.crimes.models import CrimePair, CrimeReport
from feeclab.crimes.problems import crime_report
from feeclab.derham.assembly import AssembledComplex, assemble, assemble_true_gram
from feeclab.geometry.mesh import SurfaceMesh, mesh_family
from feeclab.geometry.surfaces import Sphere, Torus
from feeclab.studies.config import StudyConfig

__version__ = "0.1.0"

__all__ = [
    "AssembledComplex",
    "ComplexError",
    "ComplexRep",
    "CrimePair",
    "CrimeReport",
    "FeecLabError",
    "MixedSolution",
    "MorphismError",
    "NeighborhoodError",
    "SolverError",
    "Sphere",
    "StudyConfig",
    "SurfaceMesh",
    "Torus",
    "ValidationError",
    "assemble",
    "assemble_true_gram",
    "crime_report",
    "mesh_family",
    "solve_hodge_eigen",
    "solve_mixed_hodge",
]
