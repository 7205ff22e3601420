"""Discrete loads: the pullback f_h = a* f and the adjoint i_h* f."""

import logging

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.core.linalg import SpdSolver
from feeclab.derham.assembly import AssembledComplex
from feeclab.derham.forms import FormCallback, pullback_coefficients
from feeclab.derham.interpolation import canonical_interpolate

logger = logging.getLogger(__name__)

PROJECTION_RTOL = 1e-10


def _solve_normal_equations(assembled: AssembledComplex, k: int, rhs: np.ndarray) -> np.ndarray:
    gram = assembled.rep.gram(k)
    x = SpdSolver(gram).solve(rhs)
    scale = float(np.linalg.norm(rhs))
    residual = float(np.linalg.norm(gram @ x - rhs)) / scale if scale > 0 else 0.0
    if residual > PROJECTION_RTOL:
        logger.warning("load projection at level %d: residual %.3e", k, residual)
    return x


def _check_form(assembled: AssembledComplex, form: FormCallback, k: int) -> None:
    assembled.family.require_level(k)
    if form.degree != k:
        raise ValidationError("form", f"expected a {k}-form", form.degree)


def pullback_load(
    assembled: AssembledComplex, f: FormCallback, k: int, project: bool = True
) -> np.ndarray:
    """f_h from the pullback a|_{M_h}* f.

    Args:
    ----
        assembled: Complex assembled with the surface f lives on
        f: Load on M
        k: Level
        project: G_h-project onto V_h^k; otherwise interpolate canonically

    Returns:
    -------
        The dof vector of f_h

    Raises:
    ------
        NeighborhoodError: A quadrature point lies outside the tubular neighborhood

    """
    _check_form(assembled, f, k)
    surface = assembled.require_surface()
    if not project:
        return canonical_interpolate(
            f, assembled.mesh, k, assembled.family, surface, assembled.exact,
            assembled.quad.degree,
        )
    coefficients = pullback_coefficients(f, assembled.geometry)
    return _solve_normal_equations(assembled, k, assembled.moments(k, coefficients))


def adjoint_moments(assembled: AssembledComplex, f: FormCallback, k: int) -> np.ndarray:
    """b̂ with entries ⟨f, i_h φ_a⟩_{L²(M)}."""
    _check_form(assembled, f, k)
    assembled.require_surface()
    coefficients = pullback_coefficients(f, assembled.geometry)
    return assembled.moments(k, coefficients, true_metric=True)


def adjoint_load(assembled: AssembledComplex, f: FormCallback, k: int) -> np.ndarray:
    """i_h* f, the G_h-Riesz representer of v ↦ ⟨f, i_h v⟩_{L²(M)}."""
    return _solve_normal_equations(assembled, k, adjoint_moments(assembled, f, k))
