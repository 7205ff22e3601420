"""Finite-dimensional Hilbert complexes, their Hodge theory and mixed solvers."""

from feeclab.core.exceptions import (
    ComplexError,
    FeecLabError,
    MorphismError,
    NeighborhoodError,
    SolverError,
    ValidationError,
)
from feeclab.core.hilbert import (
    adjoint_differential,
    betti_numbers,
    direct_sum,
    graph_gram,
    harmonic_basis,
    hodge_decompose,
    poincare_constant,
)
from feeclab.core.io import dump_complex, load_complex
from feeclab.core.models import (
    ComplexDiagnostics,
    ComplexRep,
    EigenResult,
    HodgeSplit,
    Level,
    MixedSolution,
    PoincareResult,
)
from feeclab.core.sampling import random_complex
from feeclab.core.solvers import (
    infsup_lower_bound,
    solve_hodge_eigen,
    solve_mixed_hodge,
    stability_ratio,
)
from feeclab.core.validators import ComplexValidator, validate

__all__ = [
    "ComplexDiagnostics",
    "ComplexError",
    "ComplexRep",
    "ComplexValidator",
    "EigenResult",
    "FeecLabError",
    "HodgeSplit",
    "Level",
    "MixedSolution",
    "MorphismError",
    "NeighborhoodError",
    "PoincareResult",
    "SolverError",
    "ValidationError",
    "adjoint_differential",
    "betti_numbers",
    "direct_sum",
    "dump_complex",
    "graph_gram",
    "harmonic_basis",
    "hodge_decompose",
    "infsup_lower_bound",
    "load_complex",
    "poincare_constant",
    "random_complex",
    "solve_hodge_eigen",
    "solve_mixed_hodge",
    "stability_ratio",
    "validate",
]
