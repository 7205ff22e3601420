"""Oriented triangulated surfaces with degree-s geometry nodes."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, ClassVar, Optional

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.geometry.surfaces import ImplicitSurface, Sphere, Torus

logger = logging.getLogger(__name__)

LOCAL_EDGES = ((0, 1), (1, 2), (2, 0))
ON_SURFACE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SurfaceMesh:
    """Triangulated surface M_h; ``edge_nodes`` holds the lifted edge midpoints when order = 2."""

    vertices: np.ndarray
    triangles: np.ndarray
    order: int = 1
    edge_nodes: Optional[np.ndarray] = None
    ORDERS: ClassVar[tuple[int, ...]] = (1, 2)

    def __post_init__(self) -> None:
        """Validate array shapes after initialization."""
        vertices = np.asarray(self.vertices, dtype=float)
        triangles = np.asarray(self.triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:  # noqa: PLR2004
            raise ValidationError("vertices", "expected shape (V, 3)", vertices.shape)
        if triangles.ndim != 2 or triangles.shape[1] != 3:  # noqa: PLR2004
            raise ValidationError("triangles", "expected shape (F, 3)", triangles.shape)
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise ValidationError("triangles", "vertex index out of range")
        if self.order not in self.ORDERS:
            raise ValidationError("order", f"must be one of {self.ORDERS}", self.order)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "triangles", triangles)
        if self.order == 2:  # noqa: PLR2004
            if self.edge_nodes is None:
                raise ValidationError("edge_nodes", "order-2 meshes need edge nodes")
            nodes = np.asarray(self.edge_nodes, dtype=float)
            if nodes.shape != (len(self.edges), 3):
                raise ValidationError("edge_nodes", "expected one node per edge", nodes.shape)
            object.__setattr__(self, "edge_nodes", nodes)

    @cached_property
    def _edge_table(self) -> tuple[np.ndarray, np.ndarray]:
        pairs = np.concatenate([self.triangles[:, [i, j]] for i, j in LOCAL_EDGES])
        edges, inverse = np.unique(np.sort(pairs, axis=1), axis=0, return_inverse=True)
        n = len(self.triangles)
        return edges, np.asarray(inverse).reshape(3, n).T

    @property
    def edges(self) -> np.ndarray:
        """Global edges (E, 2), oriented from the lower to the higher vertex index."""
        return self._edge_table[0]

    @property
    def triangle_edges(self) -> np.ndarray:
        """Edge index of local edges (0,1), (1,2), (2,0) per triangle, shape (F, 3)."""
        return self._edge_table[1]

    @cached_property
    def triangle_edge_signs(self) -> np.ndarray:
        """+1 where a local edge runs along its global orientation, else −1."""
        signs = [
            np.where(self.triangles[:, i] < self.triangles[:, j], 1, -1) for i, j in LOCAL_EDGES
        ]
        return np.stack(signs, axis=1)

    @property
    def counts(self) -> tuple[int, int, int]:
        """(V, E, F)."""
        return len(self.vertices), len(self.edges), len(self.triangles)

    @cached_property
    def h(self) -> float:
        """Maximum edge length."""
        a, b = self.vertices[self.edges[:, 0]], self.vertices[self.edges[:, 1]]
        return float(np.max(np.linalg.norm(b - a, axis=1)))

    @property
    def geom_nodes(self) -> np.ndarray:
        """Per-triangle geometry nodes (F, 3 or 6, 3): v0, v1, v2[, m01, m12, m20]."""
        corners = self.vertices[self.triangles]
        if self.order == 1 or self.edge_nodes is None:
            return corners
        return np.concatenate([corners, self.edge_nodes[self.triangle_edges]], axis=1)

    def check_topology(self, closed: bool = True) -> None:
        """Raise unless the mesh is consistently oriented and, when ``closed``, closed.

        Raises
        ------
            ValidationError: Some edge is not shared by exactly two triangles with
                opposite directions

        """
        directed = np.concatenate([self.triangles[:, [i, j]] for i, j in LOCAL_EDGES])
        if len(np.unique(directed, axis=0)) != len(directed):
            raise ValidationError("triangles", "inconsistent orientation")
        if not closed:
            return
        uses = np.bincount(self.triangle_edges.ravel(), minlength=len(self.edges))
        if np.any(uses != 2):  # noqa: PLR2004
            raise ValidationError("triangles", "mesh is not closed")

    def to_dict(self) -> dict[str, Any]:
        """Convert mesh summary to dictionary.

        Returns
        -------
            Entity counts, geometry order and mesh size

        """
        v, e, f = self.counts
        return {"vertices": v, "edges": e, "triangles": f, "order": self.order, "h": self.h}


def euler_characteristic(mesh: SurfaceMesh) -> int:
    """V − E + F."""
    v, e, f = mesh.counts
    return v - e + f


def orient_outward(
    vertices: np.ndarray, triangles: np.ndarray, surface: ImplicitSurface
) -> np.ndarray:
    """Flip triangles whose flat normal points against the surface normal."""
    corners = vertices[triangles]
    normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    outward = surface.normal(corners.mean(axis=1))
    flip = np.einsum("ij,ij->i", normals, outward) < 0
    oriented = triangles.copy()
    oriented[flip] = oriented[flip][:, [0, 2, 1]]
    return oriented


_ICOSAHEDRON_FACES = (
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
)  # fmt: skip


def icosahedron(sphere: Optional[Sphere] = None) -> SurfaceMesh:
    """Icosahedron inscribed in the sphere (12 vertices, 30 edges, 20 triangles)."""
    sphere = sphere or Sphere()
    phi = (1 + np.sqrt(5.0)) / 2
    raw = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )  # fmt: skip
    vertices = sphere.radius * raw / np.linalg.norm(raw, axis=1)[:, None]
    triangles = orient_outward(vertices, np.array(_ICOSAHEDRON_FACES), sphere)
    mesh = SurfaceMesh(vertices=vertices, triangles=triangles)
    mesh.check_topology()
    return mesh


def torus_mesh(torus: Optional[Torus] = None, n_major: int = 24, n_minor: int = 8) -> SurfaceMesh:
    """Structured mesh of the torus: an n_major × n_minor grid with each quad split in two."""
    torus = torus or Torus()
    theta = 2 * np.pi * np.arange(n_major) / n_major
    phi = 2 * np.pi * np.arange(n_minor) / n_minor
    vertices = torus.point(*np.meshgrid(theta, phi, indexing="ij")).reshape(-1, 3)

    def index(i: np.ndarray, j: np.ndarray) -> np.ndarray:
        return (i % n_major) * n_minor + (j % n_minor)

    i, j = (grid.ravel() for grid in np.meshgrid(np.arange(n_major), np.arange(n_minor),
                                                 indexing="ij"))
    a, b, c, d = index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1)
    triangles = np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])
    mesh = SurfaceMesh(vertices=vertices, triangles=orient_outward(vertices, triangles, torus))
    mesh.check_topology()
    return mesh


def base_mesh(surface: ImplicitSurface) -> SurfaceMesh:
    """Coarsest mesh of a built-in surface."""
    if isinstance(surface, Sphere):
        return icosahedron(surface)
    if isinstance(surface, Torus):
        return torus_mesh(surface)
    raise ValidationError("surface", "no base mesh for this surface", surface.name)


def lift_to_surface(mesh: SurfaceMesh, surface: ImplicitSurface, s: int) -> SurfaceMesh:
    """Degree-s geometry: vertices on M and, for s = 2, edge nodes a(midpoint).

    Args:
    ----
        mesh: Mesh whose vertices lie in the tubular neighborhood
        surface: Target surface
        s: Geometry degree, 1 or 2

    Returns:
    -------
        Lifted mesh of order s

    Raises:
    ------
        NeighborhoodError: A node lies outside the tubular neighborhood

    """
    if s not in SurfaceMesh.ORDERS:
        raise ValidationError("s", f"must be one of {SurfaceMesh.ORDERS}", s)
    vertices = mesh.vertices
    delta = surface.check_neighborhood(vertices)
    off = np.abs(delta) > ON_SURFACE_TOL
    if np.any(off):
        logger.debug("projecting %d vertices onto the surface", int(off.sum()))
        vertices = vertices.copy()
        vertices[off] = surface.closest_point(vertices[off])
    edge_nodes = None
    if s == 2:  # noqa: PLR2004
        midpoints = 0.5 * (vertices[mesh.edges[:, 0]] + vertices[mesh.edges[:, 1]])
        edge_nodes = surface.closest_point(midpoints)
    return SurfaceMesh(vertices=vertices, triangles=mesh.triangles, order=s,
                       edge_nodes=edge_nodes)


def refine(mesh: SurfaceMesh, surface: ImplicitSurface) -> SurfaceMesh:
    """Split every triangle 1 → 4 at edge midpoints projected onto M; keep the geometry order."""
    v = len(mesh.vertices)
    midpoints = 0.5 * (mesh.vertices[mesh.edges[:, 0]] + mesh.vertices[mesh.edges[:, 1]])
    vertices = np.concatenate([mesh.vertices, surface.closest_point(midpoints)])
    t = mesh.triangles
    m01, m12, m20 = (v + mesh.triangle_edges[:, i] for i in range(3))
    triangles = np.concatenate(
        [
            np.stack([t[:, 0], m01, m20], 1),
            np.stack([t[:, 1], m12, m01], 1),
            np.stack([t[:, 2], m20, m12], 1),
            np.stack([m01, m12, m20], 1),
        ]
    )
    refined = SurfaceMesh(vertices=vertices, triangles=triangles)
    if mesh.order > 1:
        refined = lift_to_surface(refined, surface, mesh.order)
    logger.debug("refined mesh: %s", refined.to_dict())
    return refined


def mesh_family(
    surface: ImplicitSurface, levels: int, s: int = 1, min_level: int = 0
) -> list[SurfaceMesh]:
    """Lifted meshes for refinement levels min_level .. levels − 1."""
    mesh = lift_to_surface(base_mesh(surface), surface, 1)
    family = []
    for level in range(levels):
        if level >= min_level:
            family.append(lift_to_surface(mesh, surface, s))
        if level + 1 < levels:
            mesh = refine(mesh, surface)
    return family
