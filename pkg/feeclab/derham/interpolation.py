"""Canonical interpolation: vertex values, edge integrals and triangle integrals."""

from typing import Optional, Union

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.derham.families import ElementFamily, Lagrange2Family, get_family
from feeclab.derham.forms import FormCallback, pullback_coefficients
from feeclab.geometry.mapping import evaluate_geometry
from feeclab.geometry.mesh import SurfaceMesh
from feeclab.geometry.quadrature import REFERENCE_VERTICES, interval_rule, triangle_rule
from feeclab.geometry.surfaces import ImplicitSurface, closest_point_jacobian

DEFAULT_QUAD_DEGREE = 6


def _edge_curves(
    mesh: SurfaceMesh, t: np.ndarray, surface: Optional[ImplicitSurface], exact: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Points (E, T, 3) and velocities along every globally oriented edge of M_h."""
    head = mesh.vertices[mesh.edges[:, 1]][:, None, :]
    tail = mesh.vertices[mesh.edges[:, 0]][:, None, :]
    s = t[None, :, None]
    if mesh.order == 2 and mesh.edge_nodes is not None and not exact:  # noqa: PLR2004
        middle = mesh.edge_nodes[:, None, :]
        points = tail * (1 - s) * (1 - 2 * s) + 4 * s * (1 - s) * middle + head * s * (2 * s - 1)
        velocity = tail * (4 * s - 3) + middle * (4 - 8 * s) + head * (4 * s - 1)
        return points, velocity
    points = tail + s * (head - tail)
    velocity = np.broadcast_to(head - tail, points.shape)
    if exact and surface is not None:
        velocity = np.einsum("etij,etj->eti", closest_point_jacobian(surface, points), velocity)
        points = surface.closest_point(points)
    return points, velocity


def _edge_integrals(
    form: FormCallback,
    mesh: SurfaceMesh,
    surface: Optional[ImplicitSurface],
    exact: bool,
    quad_degree: int,
) -> np.ndarray:
    t, w = interval_rule(quad_degree)
    points, velocity = _edge_curves(mesh, t, surface, exact)
    if surface is not None and not exact:
        velocity = np.einsum("etij,etj->eti", closest_point_jacobian(surface, points), velocity)
        points = surface.closest_point(points)
    values = form.ambient(points)
    return np.einsum("etc,etc,t->e", values, velocity, w)


def _lagrange_nodes(mesh: SurfaceMesh) -> np.ndarray:
    midpoints = 0.5 * (mesh.vertices[mesh.edges[:, 0]] + mesh.vertices[mesh.edges[:, 1]])
    nodes = mesh.edge_nodes if mesh.order == 2 and mesh.edge_nodes is not None else midpoints
    return np.concatenate([mesh.vertices, nodes])


def canonical_interpolate(
    form: FormCallback,
    mesh: SurfaceMesh,
    k: int,
    family: Union[str, ElementFamily] = "whitney",
    surface: Optional[ImplicitSurface] = None,
    exact: bool = False,
    quad_degree: int = DEFAULT_QUAD_DEGREE,
) -> np.ndarray:
    """Degrees of freedom of a form on M, or on the mesh itself when no surface is given.

    Whitney dofs are vertex values, integrals over globally oriented edges and integrals
    over triangles; Lagrange dofs are nodal values of the (pulled-back) coefficients.

    Args:
    ----
        form: Form of degree k
        mesh: Mesh M_h
        k: Level
        family: Element family or its name
        surface: Surface the form lives on; the form is pulled back through a
        exact: Integrate along the curved image a(M_h) instead of M_h
        quad_degree: Degree of the edge and triangle rules

    Returns:
    -------
        The dof vector

    """
    family = get_family(family)
    family.require_level(k)
    if form.degree != k:
        raise ValidationError("form", f"expected a {k}-form", form.degree)
    if exact and surface is None:
        raise ValidationError("surface", "exact geometry needs a surface")
    if isinstance(family, Lagrange2Family):
        if k == 0:
            nodes = _lagrange_nodes(mesh)
            if surface is not None:
                nodes = surface.closest_point(nodes)
            return form.ambient(nodes)
        geometry = evaluate_geometry(mesh, REFERENCE_VERTICES, surface, exact)
        coefficients = pullback_coefficients(form, geometry)
        return coefficients.reshape(-1)
    if k == 0:
        points = mesh.vertices if surface is None else surface.closest_point(mesh.vertices)
        return form.ambient(points)
    if k == 1:
        return _edge_integrals(form, mesh, surface, exact, quad_degree)
    rule = triangle_rule(quad_degree)
    geometry = evaluate_geometry(mesh, rule.points, surface, exact)
    return pullback_coefficients(form, geometry) @ rule.weights
