"""Implicit surfaces, lifted meshes and the geometry of the tangent map onto M."""

from feeclab.geometry.io import read_soff, write_soff
from feeclab.geometry.mapping import (
    PointGeometry,
    evaluate_geometry,
    orthonormal_frame,
    singular_values,
    tangent_lift,
)
from feeclab.geometry.mesh import (
    LOCAL_EDGES,
    SurfaceMesh,
    base_mesh,
    euler_characteristic,
    icosahedron,
    lift_to_surface,
    mesh_family,
    orient_outward,
    refine,
    torus_mesh,
)
from feeclab.geometry.quadrature import (
    REFERENCE_VERTICES,
    QuadratureRule,
    interval_rule,
    triangle_rule,
)
from feeclab.geometry.report import GeometryReport, geometry_report, jacobian_bounds
from feeclab.geometry.shapes import barycentric, lagrange_shape
from feeclab.geometry.surfaces import (
    SURFACES,
    ImplicitSurface,
    LevelSetSurface,
    Plane,
    Sphere,
    Torus,
    closest_point,
    closest_point_jacobian,
    get_surface,
    parallel_curvatures,
    shape_operator,
    tangent_projector,
)

__all__ = [
    "LOCAL_EDGES",
    "REFERENCE_VERTICES",
    "SURFACES",
    "GeometryReport",
    "ImplicitSurface",
    "LevelSetSurface",
    "Plane",
    "PointGeometry",
    "QuadratureRule",
    "Sphere",
    "SurfaceMesh",
    "Torus",
    "barycentric",
    "base_mesh",
    "closest_point",
    "closest_point_jacobian",
    "euler_characteristic",
    "evaluate_geometry",
    "geometry_report",
    "get_surface",
    "icosahedron",
    "interval_rule",
    "jacobian_bounds",
    "lagrange_shape",
    "lift_to_surface",
    "mesh_family",
    "orient_outward",
    "orthonormal_frame",
    "parallel_curvatures",
    "read_soff",
    "refine",
    "shape_operator",
    "singular_values",
    "tangent_lift",
    "tangent_projector",
    "triangle_rule",
    "write_soff",
]
