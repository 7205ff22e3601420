"""Errors ‖u − i_h u_h‖ and ‖d(u − i_h u_h)‖ measured on M."""

import numpy as np

from feeclab.core.exceptions import ValidationError
from feeclab.derham.assembly import AssembledComplex, true_weights
from feeclab.derham.forms import FormCallback, pullback_coefficients


def discrete_coefficients(assembled: AssembledComplex, dofs: np.ndarray, k: int) -> np.ndarray:
    """ξ-coefficients of a discrete form at the quadrature points, (F, Q) or (F, Q, 2)."""
    if len(dofs) != assembled.rep.dim(k):
        raise ValidationError("dofs", f"expected {assembled.rep.dim(k)} entries", len(dofs))
    index, signs = assembled.family.local_dofs(assembled.mesh, k)
    local = np.asarray(dofs, dtype=float)[index] * signs
    basis = assembled.family.basis(k, assembled.quad.points)
    if basis.ndim == 3:  # noqa: PLR2004
        return np.einsum("fa,qaj->fqj", local, basis)
    return np.einsum("fa,qa->fq", local, basis)


def l2_error(assembled: AssembledComplex, form: FormCallback, dofs: np.ndarray, k: int) -> float:
    """‖form − i_h u_h‖_{L²(M)} by change of variables onto the mesh."""
    difference = pullback_coefficients(form, assembled.geometry)
    difference = difference - discrete_coefficients(assembled, dofs, k)
    weight = true_weights(assembled.geometry, assembled.quad.weights, k)
    if difference.ndim == 3:  # noqa: PLR2004
        total = np.einsum("fqi,fqij,fqj->", difference, weight, difference)
    else:
        total = np.einsum("fq,fq,fq->", difference, weight, difference)
    return float(np.sqrt(max(float(total), 0.0)))


def error_norms(
    assembled: AssembledComplex, exact: FormCallback, dofs: np.ndarray, k: int
) -> tuple[float, float]:
    """(‖u − i_h u_h‖, ‖du − i_h d u_h‖) on M; the second is 0 at the top level.

    Raises
    ------
        ValidationError: Wrong form degree or dof count, or a missing derivative below the top

    """
    assembled.require_surface()
    assembled.family.require_level(k)
    if exact.degree != k:
        raise ValidationError("exact", f"expected a {k}-form", exact.degree)
    l2 = l2_error(assembled, exact, dofs, k)
    if k == assembled.family.top:
        return l2, 0.0
    derivative = assembled.rep.diff(k) @ np.asarray(dofs, dtype=float)
    return l2, l2_error(assembled, exact.d, derivative, k + 1)
