"""Variational crimes between a true complex and an approximating one."""

from feeclab.crimes.audits import (
    boundary_preimage_check,
    cohomology_isomorphism_check,
    discrete_poincare_check,
    improved_rate_targets,
    projection_data,
)
from feeclab.crimes.jacobian import (
    adjoint_injection,
    jacobian,
    modified_complex,
    modified_harmonic_basis,
)
from feeclab.crimes.models import (
    CohomologyVerdict,
    ComplexMorphism,
    CrimePair,
    CrimeReport,
    EigenComparison,
    JacobianOp,
    MorphismDiagnostics,
    PoincareAudit,
    ProjectionAudit,
)
from feeclab.crimes.morphisms import check_morphism, compose_projection
from feeclab.crimes.problems import (
    crime_report,
    eigen_convergence_report,
    mu_gap,
    solution_gap,
    solve_discrete_mixed,
    solve_modified_mixed,
)
from feeclab.crimes.sampling import (
    adversarial_pair,
    random_crime_pair,
    scaled_pair,
    unitary_pair,
)

__all__ = [
    "CohomologyVerdict",
    "ComplexMorphism",
    "CrimePair",
    "CrimeReport",
    "EigenComparison",
    "JacobianOp",
    "MorphismDiagnostics",
    "PoincareAudit",
    "ProjectionAudit",
    "adjoint_injection",
    "adversarial_pair",
    "boundary_preimage_check",
    "check_morphism",
    "cohomology_isomorphism_check",
    "compose_projection",
    "crime_report",
    "discrete_poincare_check",
    "eigen_convergence_report",
    "improved_rate_targets",
    "jacobian",
    "modified_complex",
    "modified_harmonic_basis",
    "mu_gap",
    "projection_data",
    "random_crime_pair",
    "scaled_pair",
    "solution_gap",
    "solve_discrete_mixed",
    "solve_modified_mixed",
    "unitary_pair",
]
