"""Finite element de Rham complexes on lifted surface meshes."""

from feeclab.derham.assembly import (
    DEFAULT_QUAD_DEGREE,
    AssembledComplex,
    assemble,
    assemble_true_gram,
    discrete_weights,
    quadrature_audit,
    true_weights,
)
from feeclab.derham.exact import SphereSolution, sphere_solution, sphere_spectrum
from feeclab.derham.families import (
    FAMILIES,
    ElementFamily,
    Lagrange2Family,
    WhitneyFamily,
    get_family,
)
from feeclab.derham.forms import FormCallback, pullback_coefficients, zero_form
from feeclab.derham.interpolation import canonical_interpolate
from feeclab.derham.loads import adjoint_load, adjoint_moments, pullback_load
from feeclab.derham.norms import discrete_coefficients, error_norms, l2_error

__all__ = [
    "DEFAULT_QUAD_DEGREE",
    "FAMILIES",
    "AssembledComplex",
    "ElementFamily",
    "FormCallback",
    "Lagrange2Family",
    "SphereSolution",
    "WhitneyFamily",
    "adjoint_load",
    "adjoint_moments",
    "assemble",
    "assemble_true_gram",
    "canonical_interpolate",
    "discrete_coefficients",
    "discrete_weights",
    "error_norms",
    "get_family",
    "l2_error",
    "pullback_coefficients",
    "pullback_load",
    "quadrature_audit",
    "sphere_solution",
    "sphere_spectrum",
    "true_weights",
    "zero_form",
]
