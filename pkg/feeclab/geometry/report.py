"""Sampled geometric error of a lifted mesh: ‖δ‖_∞, ‖ν − ν_h‖_∞ and the bound on ‖I − J_h‖."""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from feeclab.geometry.mapping import PointGeometry, evaluate_geometry
from feeclab.geometry.mesh import SurfaceMesh
from feeclab.geometry.quadrature import REFERENCE_VERTICES, triangle_rule
from feeclab.geometry.surfaces import ImplicitSurface

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeometryReport:
    """Geometry error measures of one mesh."""

    delta_inf: float
    normal_gap_inf: float
    sv_range: tuple[float, float]
    jacobian_bound: tuple[float, ...]
    h: float
    samples: int = 0

    def to_dict(self) -> dict[str, Any]:
        """Convert report to dictionary.

        Returns
        -------
            Dictionary representation of the report

        """
        return {
            "h": self.h,
            "delta_inf": self.delta_inf,
            "normal_gap_inf": self.normal_gap_inf,
            "sv_min": self.sv_range[0],
            "sv_max": self.sv_range[1],
            "jacobian_bound": list(self.jacobian_bound),
            "samples": self.samples,
        }


def _ratio(alpha: np.ndarray, j: int) -> np.ndarray:
    """α_1···α_j (α_{j+1}···α_m)^{-1} at every sample."""
    return np.prod(alpha[..., :j], axis=-1) / np.prod(alpha[..., j:], axis=-1)


def jacobian_bounds(alpha: np.ndarray) -> tuple[float, ...]:
    """Per-level upper bounds on ‖I − J_k‖ from descending singular values (..., m)."""
    m = alpha.shape[-1]
    bounds = []
    for k in range(m + 1):
        low = 1.0 / float(np.max(_ratio(alpha, k)))
        high = float(np.max(_ratio(alpha, m - k)))
        bounds.append(max(abs(1.0 - low), abs(1.0 - high)))
    return tuple(bounds)


def sample_geometry(
    surface: ImplicitSurface, mesh: SurfaceMesh, quad_degree: int = 6, exact: bool = False
) -> PointGeometry:
    """Evaluate the geometry at quadrature points plus the reference vertices."""
    points = np.concatenate([triangle_rule(quad_degree).points, REFERENCE_VERTICES])
    return evaluate_geometry(mesh, points, surface=surface, exact=exact)


def geometry_report(
    surface: ImplicitSurface, mesh: SurfaceMesh, quad_degree: int = 6, exact: bool = False
) -> GeometryReport:
    """Sample δ, ν − ν_h and the singular values of Tφ_h over the mesh.

    Args:
    ----
        surface: Exact surface M
        mesh: Lifted mesh M_h
        quad_degree: Degree of the triangle rule providing the sample points
        exact: Treat M itself as the mesh surface

    Returns:
    -------
        The sampled report

    Raises:
    ------
        NeighborhoodError: A sample lies outside the tubular neighborhood

    """
    geometry = sample_geometry(surface, mesh, quad_degree, exact)
    alpha = geometry.singular_values()
    gap = np.linalg.norm(geometry.normal - geometry.normal_h, axis=-1)
    report = GeometryReport(
        delta_inf=float(np.max(np.abs(geometry.delta))),
        normal_gap_inf=float(np.max(gap)),
        sv_range=(float(alpha.min()), float(alpha.max())),
        jacobian_bound=jacobian_bounds(alpha),
        h=mesh.h,
        samples=int(alpha.shape[0] * alpha.shape[1]),
    )
    logger.debug("geometry report: %s", report.to_dict())
    return report
