"""Assembly of the discrete de Rham complex and of the true-metric Grams on M."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional, Union

import numpy as np
import scipy.sparse as sp

from feeclab.core.exceptions import NeighborhoodError, ValidationError
from feeclab.core.models import ComplexRep
from feeclab.crimes.jacobian import jacobian_from_grams
from feeclab.crimes.models import JacobianOp
from feeclab.derham.families import ElementFamily, get_family
from feeclab.geometry.mapping import PointGeometry, evaluate_geometry
from feeclab.geometry.mesh import SurfaceMesh
from feeclab.geometry.quadrature import QuadratureRule, triangle_rule
from feeclab.geometry.surfaces import ImplicitSurface

logger = logging.getLogger(__name__)

DEFAULT_QUAD_DEGREE = 6


def discrete_weights(geometry: PointGeometry, weights: np.ndarray, k: int) -> np.ndarray:
    """Quadrature weights of the g_h inner product of ξ-coefficients at level k."""
    if k == 0:
        return weights * geometry.sqrt_g
    if k == 1:
        return (weights * geometry.sqrt_g)[..., None, None] * geometry.metric_inverse
    return weights / geometry.sqrt_g


def true_weights(geometry: PointGeometry, weights: np.ndarray, k: int) -> np.ndarray:
    """Quadrature weights of the L²(M) inner product of ξ-coefficients pushed to M by φ_h."""
    if geometry.phi is None or geometry.det_phi is None:
        raise NeighborhoodError("True-metric weights need geometry evaluated with a surface")
    det = np.abs(geometry.det_phi)
    if k == 0:
        return weights * geometry.sqrt_g * det
    if k == 1:
        inverse = np.linalg.inv(geometry.phi @ geometry.r)
        metric = inverse @ np.swapaxes(inverse, -1, -2)
        return (weights * geometry.sqrt_g * det)[..., None, None] * metric
    return weights / (geometry.sqrt_g * det)


def local_gram(weight: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Element matrices (F, n, n) of a weighted inner product of a local basis."""
    if basis.ndim == 3:  # noqa: PLR2004
        local = np.einsum("fqij,qai,qbj->fab", weight, basis, basis)
    else:
        local = np.einsum("fq,qa,qb->fab", weight, basis, basis)
    return 0.5 * (local + np.swapaxes(local, 1, 2))


def local_moments(weight: np.ndarray, coefficients: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Element vectors (F, n) of a weighted inner product of coefficients with a local basis."""
    if basis.ndim == 3:  # noqa: PLR2004
        return np.einsum("fqij,fqi,qaj->fa", weight, coefficients, basis)
    return np.einsum("fq,fq,qa->fa", weight, coefficients, basis)


def scatter_matrix(
    local: np.ndarray, dofs: np.ndarray, signs: np.ndarray, size: int
) -> sp.csr_matrix:
    """Sum signed element matrices into a global sparse matrix in element order."""
    data = local * signs[:, :, None] * signs[:, None, :]
    n = dofs.shape[1]
    rows = np.broadcast_to(dofs[:, :, None], (len(dofs), n, n))
    cols = np.broadcast_to(dofs[:, None, :], (len(dofs), n, n))
    matrix = sp.coo_matrix((data.ravel(), (rows.ravel(), cols.ravel())), shape=(size, size))
    return matrix.tocsr()


def scatter_vector(
    local: np.ndarray, dofs: np.ndarray, signs: np.ndarray, size: int
) -> np.ndarray:
    """Sum signed element vectors into a global vector."""
    return np.bincount(dofs.ravel(), weights=(local * signs).ravel(), minlength=size)


@dataclass(frozen=True, eq=False)
class AssembledComplex:
    """A discrete de Rham complex on a mesh together with its assembly data."""

    rep: ComplexRep
    mesh: SurfaceMesh
    family: ElementFamily
    quad: QuadratureRule
    dof_tables: tuple[dict[str, np.ndarray], ...]
    surface: Optional[ImplicitSurface] = None
    exact: bool = False

    @cached_property
    def geometry(self) -> PointGeometry:
        """Geometry at the quadrature points, with M-side data when a surface is known."""
        return evaluate_geometry(self.mesh, self.quad.points, self.surface, self.exact)

    def require_surface(self) -> ImplicitSurface:
        """The surface, raising when the complex was assembled without one."""
        if self.surface is None:
            raise NeighborhoodError("Operation needs a complex assembled with a surface")
        return self.surface

    def true_gram(self, k: int) -> sp.csr_matrix:
        """Ĝ_k with entries ⟨i_h φ_a, i_h φ_b⟩_{L²(M)}."""
        self.require_surface()
        self.family.require_level(k)
        weight = true_weights(self.geometry, self.quad.weights, k)
        local = local_gram(weight, self.family.basis(k, self.quad.points))
        dofs, signs = self.family.local_dofs(self.mesh, k)
        return scatter_matrix(local, dofs, signs, self.rep.dim(k))

    def moments(self, k: int, coefficients: np.ndarray, true_metric: bool = False) -> np.ndarray:
        """Global vector of inner products of pulled-back coefficients with the basis."""
        weights = true_weights if true_metric else discrete_weights
        weight = weights(self.geometry, self.quad.weights, k)
        local = local_moments(weight, coefficients, self.family.basis(k, self.quad.points))
        dofs, signs = self.family.local_dofs(self.mesh, k)
        return scatter_vector(local, dofs, signs, self.rep.dim(k))

    def dof_sidecar(self) -> dict[str, Any]:
        """Entity → index maps of every level, JSON-ready."""
        return {
            "family": self.family.name,
            "levels": [
                {entity: indices.tolist() for entity, indices in table.items()}
                for table in self.dof_tables
            ],
        }

    def to_dict(self) -> dict[str, Any]:
        """Convert assembly summary to dictionary.

        Returns
        -------
            Family, dimensions, quadrature and mesh summary

        """
        return {
            "family": self.family.name,
            "dims": list(self.rep.dims),
            "quad": self.quad.to_dict(),
            "mesh": self.mesh.to_dict(),
            "exact_geometry": self.exact,
        }


def _require_quad_degree(mesh: SurfaceMesh, quad_degree: int) -> None:
    if quad_degree < 2 * mesh.order:
        raise ValidationError(
            "quad_degree", f"must be at least 2s = {2 * mesh.order}", quad_degree
        )


def assemble(
    mesh: SurfaceMesh,
    family: Union[str, ElementFamily] = "whitney",
    quad_degree: int = DEFAULT_QUAD_DEGREE,
    surface: Optional[ImplicitSurface] = None,
    exact: bool = False,
) -> AssembledComplex:
    """Assemble the complex (G_{h,k}, D_k) of an element family on a mesh.

    Args:
    ----
        mesh: Lifted mesh M_h
        family: Element family or its name
        quad_degree: Degree of the triangle rule, at least twice the geometry order
        surface: Exact surface; needed for true Grams, loads and errors on M
        exact: Use M itself as the mesh surface

    Returns:
    -------
        The assembled complex

    Raises:
    ------
        ValidationError: Inconsistent orientation or insufficient quadrature degree

    """
    family = get_family(family)
    mesh.check_topology(closed=False)
    _require_quad_degree(mesh, quad_degree)
    rule = triangle_rule(quad_degree)
    geometry = evaluate_geometry(mesh, rule.points, surface, exact)
    grams, diffs = [], []
    for k in range(family.top + 1):
        weight = discrete_weights(geometry, rule.weights, k)
        local = local_gram(weight, family.basis(k, rule.points))
        dofs, signs = family.local_dofs(mesh, k)
        grams.append(scatter_matrix(local, dofs, signs, family.dof_count(mesh, k)))
        if k < family.top:
            diffs.append(family.differential(mesh, k))
    assembled = AssembledComplex(
        rep=ComplexRep.from_matrices(grams, diffs),
        mesh=mesh,
        family=family,
        quad=rule,
        dof_tables=tuple(family.dof_table(mesh, k) for k in range(family.top + 1)),
        surface=surface,
        exact=exact,
    )
    assembled.__dict__["geometry"] = geometry
    logger.info("assembled %s complex: dims %s", family.name, assembled.rep.dims)
    return assembled


def assemble_true_gram(
    mesh: SurfaceMesh,
    surface: ImplicitSurface,
    k: int,
    quad_degree: int = DEFAULT_QUAD_DEGREE,
    family: Union[str, ElementFamily] = "whitney",
    exact: bool = False,
    assembled: Optional[AssembledComplex] = None,
) -> tuple[sp.csr_matrix, JacobianOp]:
    """Ĝ_k on M and the Jacobian operator J_k = G_{h,k}^{-1} Ĝ_k.

    Both Grams use the same quadrature points, so the deviation stays below the
    sampled geometry bound at those points.

    Raises
    ------
        NeighborhoodError: A quadrature point lies outside the tubular neighborhood

    """
    if assembled is None:
        assembled = assemble(mesh, family, quad_degree, surface=surface, exact=exact)
    elif assembled.surface is None:
        raise NeighborhoodError("Assembled complex carries no surface")
    true_gram = assembled.true_gram(k)
    return true_gram, jacobian_from_grams(k, true_gram, assembled.rep.gram(k))


def quadrature_audit(
    mesh: SurfaceMesh,
    family: Union[str, ElementFamily],
    k: int,
    quad_degree: int = DEFAULT_QUAD_DEGREE,
    surface: Optional[ImplicitSurface] = None,
) -> float:
    """Largest Gram entry change, relative to the largest entry, when doubling the degree."""
    coarse = assemble(mesh, family, quad_degree, surface=surface).rep.gram(k)
    fine = assemble(mesh, family, 2 * quad_degree, surface=surface).rep.gram(k)
    scale = abs(fine).max()
    change = float(abs(fine - coarse).max() / scale) if scale > 0 else 0.0
    logger.debug("quadrature audit at level %d: %.3e", k, change)
    return change
