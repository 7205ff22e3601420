"""One refinement level of a manufactured-solution study on the sphere."""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.core.linalg import SpdSolver
from feeclab.core.models import MixedSolution
from feeclab.core.solvers import solve_mixed_hodge
from feeclab.crimes.jacobian import jacobian_from_grams
from feeclab.crimes.models import CrimeReport
from feeclab.crimes.problems import solution_gap
from feeclab.derham.assembly import AssembledComplex, assemble
from feeclab.derham.exact import SphereSolution, sphere_solution
from feeclab.derham.forms import FormCallback
from feeclab.derham.interpolation import canonical_interpolate
from feeclab.derham.loads import adjoint_moments, pullback_load
from feeclab.derham.norms import error_norms, l2_error
from feeclab.geometry.mesh import SurfaceMesh
from feeclab.geometry.surfaces import Sphere, get_surface
from feeclab.studies.config import StudyConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LevelResult:
    """Errors, discrete solution and crime terms of one level."""

    level: int
    row: tuple[Any, ...]
    solution: MixedSolution
    crime: CrimeReport
    dims: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        """Convert level result to dictionary.

        Returns
        -------
            Dictionary representation of the level result

        """
        return {
            "level": self.level,
            "dims": list(self.dims),
            "row": [float(v) if isinstance(v, float) else v for v in self.row],
            "solution": self.solution.to_dict(),
            "crime": self.crime.to_dict(),
        }


def study_solution(config: StudyConfig) -> tuple[Sphere, SphereSolution]:
    """Surface and manufactured solution of a study.

    Raises
    ------
        ValidationError: The surface is not a sphere

    """
    surface = get_surface(config.surface)
    if not isinstance(surface, Sphere):
        raise ValidationError("surface", "manufactured solutions exist on the sphere only",
                              config.surface)
    return surface, sphere_solution(config.k, config.ell, surface.radius)


def _constant(degree: int, value: float) -> FormCallback:
    return FormCallback(degree, lambda x: np.full(len(x), value), name="harmonic")


def harmonic_gap(assembled: AssembledComplex, surface: Sphere, k: int) -> float:
    """‖r − i_h π_h r‖ for the unit harmonic form r of the sphere at level k (0 if none)."""
    if k == 1:
        return 0.0
    r = _constant(k, 1.0 / np.sqrt(4 * np.pi * surface.radius**2))
    dofs = canonical_interpolate(
        r, assembled.mesh, k, assembled.family, surface, assembled.exact, assembled.quad.degree
    )
    return l2_error(assembled, r, dofs, k)


def _interpolation_error(
    assembled: AssembledComplex, surface: Sphere, form: FormCallback, k: int
) -> float:
    dofs = canonical_interpolate(
        form, assembled.mesh, k, assembled.family, surface, assembled.exact, assembled.quad.degree
    )
    return sum(error_norms(assembled, form, dofs, k))


def solve_level(config: StudyConfig, mesh: SurfaceMesh, level: int) -> LevelResult:
    """Assemble, solve and measure one level.

    The discrete problem uses the load f_h from the pullback; the modified problem uses
    the true Grams Ĝ and the load i_h* f, so their gap isolates the variational crimes.

    Args:
    ----
        config: Study configuration
        mesh: Lifted mesh of this level
        level: Refinement level

    Returns:
    -------
        The level result

    """
    surface, exact = study_solution(config)
    k = config.k
    assembled = assemble(mesh, config.family, config.quad_degree, surface,
                         config.exact_geometry)
    rep = assembled.rep
    f_h = pullback_load(assembled, exact.f, k, project=config.project_load)
    discrete = solve_mixed_hodge(rep, k, f_h)

    l2_u, graph_u = error_norms(assembled, exact.u, discrete.u, k)
    l2_sigma = graph_sigma = 0.0
    if k > 0 and exact.sigma is not None:
        l2_sigma, graph_sigma = error_norms(assembled, exact.sigma, discrete.sigma, k - 1)
    l2_p = l2_error(assembled, exact.p, discrete.p, k)

    true_grams = [assembled.true_gram(j) for j in range(rep.top + 1)]
    jacobian = jacobian_from_grams(k, true_grams[k], rep.gram(k))
    moments = adjoint_moments(assembled, exact.f, k)
    pulled = SpdSolver(rep.gram(k)).solve(moments)
    difference = f_h - pulled
    data_error = float(np.sqrt(max(float(difference @ (rep.gram(k) @ difference)), 0.0)))
    f_norm = l2_error(assembled, exact.f, np.zeros(rep.dim(k)), k)
    geometry_error = jacobian.deviation * f_norm

    modified_rep = rep.with_grams(true_grams)
    modified = solve_mixed_hodge(modified_rep, k, SpdSolver(true_grams[k]).solve(moments))
    perturbation = solution_gap(rep, k, discrete, modified)

    best = _interpolation_error(assembled, surface, exact.u, k)
    if k > 0 and exact.sigma is not None:
        best += _interpolation_error(assembled, surface, exact.sigma, k - 1)
    lhs = l2_u + graph_u + l2_sigma + graph_sigma + l2_p
    total = best + data_error + geometry_error
    crimes = data_error + geometry_error
    crime = CrimeReport(
        lhs=lhs,
        best_approx=best,
        data_error=data_error,
        geometry_error=geometry_error,
        mu=harmonic_gap(assembled, surface, k),
        ratio=lhs / total if total > 0 else 0.0,
        perturbation=perturbation,
        perturbation_constant=perturbation / crimes if crimes > 0 else 0.0,
    )
    row = (level, mesh.h, l2_u, graph_u, l2_sigma, graph_sigma, l2_p, jacobian.deviation,
           data_error)
    logger.info("level %d: h = %.4g, l2_u = %.4e, deviation = %.3e", level, mesh.h, l2_u,
                jacobian.deviation)
    return LevelResult(level=level, row=row, solution=discrete, crime=crime, dims=rep.dims)
