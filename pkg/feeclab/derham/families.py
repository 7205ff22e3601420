"""Finite element families of differential forms on triangulated surfaces.

Local bases are given on the reference triangle in ξ-coordinates:

- k = 0: scalar values
- k = 1: the components (ω(∂_1), ω(∂_2)) of a 1-form
- k = 2: the coefficient c of c dξ1∧dξ2
"""

from abc import ABC, abstractmethod
from typing import ClassVar, Union

import numpy as np
import scipy.sparse as sp

from feeclab.core.exceptions import ValidationError
from feeclab.geometry.mesh import LOCAL_EDGES, SurfaceMesh
from feeclab.geometry.quadrature import REFERENCE_VERTICES
from feeclab.geometry.shapes import BARYCENTRIC_GRADIENTS, barycentric, lagrange_shape


class ElementFamily(ABC):
    """A complex of finite element spaces V_h^0 → ... on a surface mesh."""

    name: ClassVar[str]
    order: ClassVar[int]
    top: ClassVar[int]

    def require_level(self, k: int) -> None:
        """Raise unless 0 <= k <= top."""
        if not 0 <= k <= self.top:
            raise ValidationError("k", f"family {self.name} has levels 0..{self.top}", k)

    @abstractmethod
    def dof_count(self, mesh: SurfaceMesh, k: int) -> int:
        """Dimension of V_h^k."""

    @abstractmethod
    def local_dofs(self, mesh: SurfaceMesh, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Global indices (F, n) of each triangle's local basis and their signs (F, n)."""

    @abstractmethod
    def basis(self, k: int, points: np.ndarray) -> np.ndarray:
        """Local basis at reference points: (Q, n) for k = 0, 2 and (Q, n, 2) for k = 1."""

    @abstractmethod
    def differential(self, mesh: SurfaceMesh, k: int) -> sp.csr_matrix:
        """Integer matrix of d: V_h^k → V_h^{k+1}."""

    @abstractmethod
    def dof_table(self, mesh: SurfaceMesh, k: int) -> dict[str, np.ndarray]:
        """Index of the first dof attached to each mesh entity, by entity kind."""

    def dims(self, mesh: SurfaceMesh) -> tuple[int, ...]:
        """Dimensions of every level."""
        return tuple(self.dof_count(mesh, k) for k in range(self.top + 1))


def _incidence(
    rows: np.ndarray, cols: np.ndarray, values: np.ndarray, shape: tuple[int, int]
) -> sp.csr_matrix:
    matrix = sp.coo_matrix((values.ravel(), (rows.ravel(), cols.ravel())), shape=shape).tocsr()
    matrix.sum_duplicates()
    return matrix


class WhitneyFamily(ElementFamily):
    """Lowest-order P_1^-Λ^k: vertex hats, Whitney edge forms and per-triangle densities."""

    name = "whitney"
    order = 1
    top = 2

    def dof_count(self, mesh: SurfaceMesh, k: int) -> int:
        self.require_level(k)
        return mesh.counts[k]

    def local_dofs(self, mesh: SurfaceMesh, k: int) -> tuple[np.ndarray, np.ndarray]:
        self.require_level(k)
        if k == 0:
            return mesh.triangles, np.ones_like(mesh.triangles)
        if k == 1:
            return mesh.triangle_edges, mesh.triangle_edge_signs
        index = np.arange(len(mesh.triangles))[:, None]
        return index, np.ones_like(index)

    def basis(self, k: int, points: np.ndarray) -> np.ndarray:
        self.require_level(k)
        lam = barycentric(points)
        if k == 0:
            return lam
        if k == 1:
            grad = BARYCENTRIC_GRADIENTS
            return np.stack(
                [lam[:, i, None] * grad[j] - lam[:, j, None] * grad[i] for i, j in LOCAL_EDGES],
                axis=1,
            )
        # 2 dξ1∧dξ2 integrates to one over the reference triangle
        return np.full((lam.shape[0], 1), 2.0)

    def differential(self, mesh: SurfaceMesh, k: int) -> sp.csr_matrix:
        self.require_level(k)
        v, e, f = mesh.counts
        if k == 0:
            rows = np.repeat(np.arange(e), 2)
            values = np.tile([-1.0, 1.0], e)
            return _incidence(rows, mesh.edges.ravel(), values, (e, v))
        if k == 1:
            rows = np.repeat(np.arange(f), 3)
            signs = mesh.triangle_edge_signs.astype(float)
            return _incidence(rows, mesh.triangle_edges.ravel(), signs.ravel(), (f, e))
        return sp.csr_matrix((0, f))

    def dof_table(self, mesh: SurfaceMesh, k: int) -> dict[str, np.ndarray]:
        self.require_level(k)
        entity = ("vertices", "edges", "triangles")[k]
        return {entity: np.arange(mesh.counts[k])}


class Lagrange2Family(ElementFamily):
    """Continuous P2 scalars and their gradients in broken linear 1-forms λ_i dξ_j.

    Level 1 is discontinuous across edges, so it is not the conforming quadratic 1-form
    space and the complex stops at degree 1. It carries only the k = 0 studies with r = 2;
    Whitney forms cover k = 1 and k = 2.
    """

    name = "lagrange2"
    order = 2
    top = 1
    FORMS_PER_TRIANGLE: ClassVar[int] = 6

    def dof_count(self, mesh: SurfaceMesh, k: int) -> int:
        self.require_level(k)
        v, e, f = mesh.counts
        return v + e if k == 0 else self.FORMS_PER_TRIANGLE * f

    def local_dofs(self, mesh: SurfaceMesh, k: int) -> tuple[np.ndarray, np.ndarray]:
        self.require_level(k)
        if k == 0:
            dofs = np.concatenate([mesh.triangles, len(mesh.vertices) + mesh.triangle_edges], 1)
            return dofs, np.ones_like(dofs)
        n = self.FORMS_PER_TRIANGLE
        dofs = n * np.arange(len(mesh.triangles))[:, None] + np.arange(n)
        return dofs, np.ones_like(dofs)

    def basis(self, k: int, points: np.ndarray) -> np.ndarray:
        self.require_level(k)
        if k == 0:
            return lagrange_shape(2, points)[0]
        lam = barycentric(points)
        # index 2i + j ↦ λ_i dξ_j
        forms = np.zeros((lam.shape[0], self.FORMS_PER_TRIANGLE, 2))
        for i in range(3):
            for j in range(2):
                forms[:, 2 * i + j, j] = lam[:, i]
        return forms

    def differential(self, mesh: SurfaceMesh, k: int) -> sp.csr_matrix:
        self.require_level(k)
        if k == 1:
            return sp.csr_matrix((0, self.dof_count(mesh, 1)))
        # ∂_j N_a is linear, so it equals Σ_i ∂_j N_a(v_i) λ_i
        _, grads = lagrange_shape(2, REFERENCE_VERTICES)
        local = np.rint(grads.transpose(0, 2, 1).reshape(self.FORMS_PER_TRIANGLE, 6))
        rows, _ = self.local_dofs(mesh, 1)
        cols, _ = self.local_dofs(mesh, 0)
        f = len(mesh.triangles)
        row_index = np.broadcast_to(rows[:, :, None], (f, 6, 6))
        col_index = np.broadcast_to(cols[:, None, :], (f, 6, 6))
        values = np.broadcast_to(local, (f, 6, 6))
        shape = (self.dof_count(mesh, 1), self.dof_count(mesh, 0))
        return _incidence(row_index, col_index, values, shape)

    def dof_table(self, mesh: SurfaceMesh, k: int) -> dict[str, np.ndarray]:
        self.require_level(k)
        v, e, f = mesh.counts
        if k == 0:
            return {"vertices": np.arange(v), "edges": v + np.arange(e)}
        return {"triangles": self.FORMS_PER_TRIANGLE * np.arange(f)}


FAMILIES: dict[str, type[ElementFamily]] = {"whitney": WhitneyFamily, "lagrange2": Lagrange2Family}


def get_family(family: Union[str, ElementFamily]) -> ElementFamily:
    """Resolve a family by name."""
    if isinstance(family, ElementFamily):
        return family
    try:
        return FAMILIES[family]()
    except KeyError:
        raise ValidationError(
            "family", f"unknown element family; choose from {sorted(FAMILIES)}", family
        ) from None
