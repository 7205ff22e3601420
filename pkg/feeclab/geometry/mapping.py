"""Element maps of M_h and the tangent map Tφ_h = Ta ∘ Tj_h onto M."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from feeclab.core.exceptions import NeighborhoodError
from feeclab.geometry.mesh import SurfaceMesh
from feeclab.geometry.shapes import lagrange_shape
from feeclab.geometry.surfaces import ImplicitSurface, closest_point_jacobian, tangent_projector

logger = logging.getLogger(__name__)

FRAME_TOL = 1e-14
TANGENCY_TOL = 1e-10


def orthonormal_frame(jac: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """QR of stacked 3×2 Jacobians with positive R diagonal: jac = E R.

    Raises
    ------
        NeighborhoodError: A Jacobian is (numerically) rank deficient

    """
    e, r = np.linalg.qr(jac)
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    if np.any(np.abs(np.diagonal(r, axis1=-2, axis2=-1)) <= FRAME_TOL * (np.abs(r).max() + 1)):
        raise NeighborhoodError("Degenerate tangent frame")
    return e * signs[..., None, :], r * signs[..., :, None]


@dataclass(frozen=True, eq=False)
class PointGeometry:
    """Geometry of M_h and its lift to M at reference points of every triangle.

    Arrays are indexed (triangle, point, ...). The M-side fields are None when no surface
    is supplied.
    """

    points: np.ndarray
    x: np.ndarray
    jac: np.ndarray
    frame: np.ndarray
    r: np.ndarray
    sqrt_g: np.ndarray
    normal_h: np.ndarray
    delta: Optional[np.ndarray] = None
    normal: Optional[np.ndarray] = None
    target: Optional[np.ndarray] = None
    tangent_map: Optional[np.ndarray] = None
    frame_m: Optional[np.ndarray] = None
    phi: Optional[np.ndarray] = None
    det_phi: Optional[np.ndarray] = None

    @property
    def metric_inverse(self) -> np.ndarray:
        """g⁻¹ = R⁻¹R⁻ᵀ."""
        r_inv = np.linalg.inv(self.r)
        return r_inv @ np.swapaxes(r_inv, -1, -2)

    def singular_values(self) -> np.ndarray:
        """Singular values α1 >= α2 of Φ at every point."""
        if self.phi is None:
            raise NeighborhoodError("Geometry was evaluated without a surface")
        return np.linalg.svd(self.phi, compute_uv=False)


def evaluate_geometry(
    mesh: SurfaceMesh,
    points: np.ndarray,
    surface: Optional[ImplicitSurface] = None,
    exact: bool = False,
) -> PointGeometry:
    """Evaluate the element maps at reference points.

    Args:
    ----
        mesh: Mesh; its geometry order selects P1 or P2 element maps
        points: Reference points (Q, 2)
        surface: Surface for the lift quantities δ, ν, a, Ta and Φ
        exact: Use the exact curved triangles a(flat triangle) as M_h (needs ``surface``)

    Returns:
    -------
        The evaluated geometry

    """
    points = np.atleast_2d(points)
    if exact:
        if surface is None:
            raise NeighborhoodError("Exact geometry needs a surface")
        values, grads = lagrange_shape(1, points)
        corners = mesh.vertices[mesh.triangles]
        flat = np.einsum("qn,fnc->fqc", values, corners)
        flat_jac = np.einsum("qnd,fnc->fqcd", grads, corners)
        x = surface.closest_point(flat)
        jac = closest_point_jacobian(surface, flat) @ flat_jac
    else:
        values, grads = lagrange_shape(mesh.order, points)
        nodes = mesh.geom_nodes
        x = np.einsum("qn,fnc->fqc", values, nodes)
        jac = np.einsum("qnd,fnc->fqcd", grads, nodes)
    frame, r = orthonormal_frame(jac)
    cross = np.cross(jac[..., 0], jac[..., 1])
    geometry = {
        "points": points,
        "x": x,
        "jac": jac,
        "frame": frame,
        "r": r,
        "sqrt_g": r[..., 0, 0] * r[..., 1, 1],
        "normal_h": cross / np.linalg.norm(cross, axis=-1)[..., None],
    }
    if surface is not None:
        delta = surface.check_neighborhood(x)
        normal = surface.normal(x)
        tangent_map = tangent_projector(normal) - delta[..., None, None] * surface.hessian(x)
        frame_m, _ = orthonormal_frame(tangent_map @ jac)
        phi = np.swapaxes(frame_m, -1, -2) @ tangent_map @ frame
        geometry.update(
            delta=delta,
            normal=normal,
            target=x - delta[..., None] * normal,
            tangent_map=tangent_map,
            frame_m=frame_m,
            phi=phi,
            det_phi=np.linalg.det(phi),
        )
    return PointGeometry(**geometry)


def tangent_lift(
    surface: ImplicitSurface, x: np.ndarray, y: np.ndarray, normal_h: np.ndarray
) -> np.ndarray:
    """Y_h = P_h (I + δS) Y for tangent vectors Y at a(x) and M_h normals ν_h at x.

    Vectors with a normal component are projected onto T_{a(x)}M first, with a warning.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    delta = surface.check_neighborhood(x)
    normal = surface.normal(x)
    along = np.einsum("...i,...i->...", normal, y)
    if np.any(np.abs(along) > TANGENCY_TOL * np.maximum(np.linalg.norm(y, axis=-1), 1.0)):
        logger.warning("tangent_lift: vector not tangent to M; projecting")
        y = y - along[..., None] * normal
    lifted = y - delta[..., None] * np.einsum("...ij,...j->...i", surface.hessian(x), y)
    return np.einsum("...ij,...j->...i", tangent_projector(np.asarray(normal_h)), lifted)


def singular_values(surface: ImplicitSurface, x: np.ndarray, jac: np.ndarray) -> np.ndarray:
    """Singular values (α1 >= α2) of Tφ_h at x, where jac spans T_x M_h (shape (..., 3, 2)).

    Computed from orthonormal frames of M_h at x and of M at a(x); independent of both
    frame choices.
    """
    x = np.asarray(x, dtype=float)
    frame, _ = orthonormal_frame(np.asarray(jac, dtype=float))
    tangent_map = closest_point_jacobian(surface, x)
    frame_m, _ = orthonormal_frame(tangent_map @ frame)
    phi = np.swapaxes(frame_m, -1, -2) @ tangent_map @ frame
    return np.linalg.svd(phi, compute_uv=False)
