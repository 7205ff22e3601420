"""Numerical audits of the error bounds relating a crime pair's complexes."""

import logging

import numpy as np

from feeclab.core.exceptions import MorphismError
from feeclab.core.hilbert import graph_gram, harmonic_basis, poincare_constant
from feeclab.core.linalg import SpdSolver, dense, matrix_rank, null_basis, operator_norm
from feeclab.crimes.jacobian import adjoint_injection, jacobian, pulled_back_gram
from feeclab.crimes.models import CohomologyVerdict, CrimePair, PoincareAudit, ProjectionAudit
from feeclab.crimes.problems import mu_gap

logger = logging.getLogger(__name__)

GAP_MARGIN = 1e-9
PROJECTION_TOL = 1e-10


def projection_data(
    pair: CrimePair, k: int, projection: np.ndarray, f: np.ndarray
) -> ProjectionAudit:
    """Audit ‖Π_h f − i_h* f‖_h <= C (‖I − J_h‖‖f‖ + inf_φ ‖f − i_h φ‖).

    The constant is C = 2‖Π_h‖ + ‖i_h*‖ with W-operator norms.

    Args:
    ----
        pair: Crime pair
        k: Level
        projection: Matrix of Π_h from W^k to W_h^k
        f: True level-k vector

    Returns:
    -------
        The measured terms

    Raises:
    ------
        MorphismError: Π_h ∘ i_h is not the identity

    """
    projection = np.asarray(projection, dtype=float)
    f = np.asarray(f, dtype=float)
    inject = pair.injection.maps[k]
    defect = float(np.abs(projection @ inject - np.eye(inject.shape[1])).max(initial=0.0))
    if defect > PROJECTION_TOL * max(1.0, float(np.abs(projection).max(initial=0.0))):
        raise MorphismError(f"Π_h∘i_h differs from identity by {defect:.3e}", k)
    true_gram = dense(pair.true_complex.gram(k))
    gram = dense(pair.approx_complex.gram(k))
    difference = projection @ f - adjoint_injection(pair, k, f)
    lhs = float(np.sqrt(max(difference @ gram @ difference, 0.0)))
    size = float(np.sqrt(max(f @ true_gram @ f, 0.0)))
    moment = inject.T @ (true_gram @ f)
    projected = float(moment @ SpdSolver(pulled_back_gram(pair, k)).solve(moment))
    best = float(np.sqrt(max(size**2 - projected, 0.0)))
    adjoint = SpdSolver(gram).solve(inject.T @ true_gram)
    constant = 2 * operator_norm(projection, gram, true_gram) + operator_norm(
        adjoint, gram, true_gram
    )
    return ProjectionAudit(
        lhs=lhs,
        geometry_term=jacobian(pair, k).deviation * size,
        best_approx=best,
        constant=constant,
    )


def discrete_poincare_check(pair: CrimePair, k: int) -> PoincareAudit:
    """Compare c_{P,h} with c_P ‖π_h^k‖_V ‖i_h^{k+1}‖_V."""
    measured = poincare_constant(pair.approx_complex, k)
    if measured.degenerate:
        return PoincareAudit(measured=0.0, bound=0.0, degenerate=True)
    true, approx = pair.true_complex, pair.approx_complex
    c_p = poincare_constant(true, k).constant
    projection_norm = operator_norm(
        pair.projection.maps[k], graph_gram(approx, k), graph_gram(true, k)
    )
    injection_norm = operator_norm(
        pair.injection.maps[k + 1], graph_gram(true, k + 1), graph_gram(approx, k + 1)
    )
    return PoincareAudit(measured=measured.constant, bound=c_p * projection_norm * injection_norm)


def cohomology_isomorphism_check(pair: CrimePair) -> list[CohomologyVerdict]:
    """Per level, test the gap hypothesis and bijectivity of i_h on harmonic spaces.

    The hypothesis is ‖q − i_hπ_h q‖ < ‖q‖ for every nonzero harmonic q; the induced map
    sends the discrete harmonic basis to the harmonic parts of its images.
    """
    verdicts = []
    for k in range(pair.top + 1):
        q = harmonic_basis(pair.true_complex, k)
        q_h = harmonic_basis(pair.approx_complex, k)
        gap = mu_gap(pair, k)
        hypothesis = gap < 1.0 - GAP_MARGIN
        induced = q.T @ (dense(pair.true_complex.gram(k)) @ (pair.injection.maps[k] @ q_h))
        bijective = q.shape[1] == q_h.shape[1] and matrix_rank(induced) == q.shape[1]
        verdict = CohomologyVerdict(level=k, gap=gap, hypothesis=hypothesis, bijective=bijective)
        if verdict.violated:
            logger.warning("cohomology check violated at level %d: %s", k, verdict.to_dict())
        verdicts.append(verdict)
    return verdicts


def boundary_preimage_check(pair: CrimePair, k: int) -> bool:
    """Whether {v_h : i_h v_h ∈ B^k} equals B_h^k."""
    inject = pair.injection.maps[k]
    discrete_rank = matrix_rank(pair.approx_complex.diff(k - 1)) if k > 0 else 0
    if k == 0:
        return matrix_rank(inject) == inject.shape[1]
    d_true = dense(pair.true_complex.diff(k - 1))
    kernel = null_basis(np.hstack([inject, -d_true]))
    preimage_rank = matrix_rank(kernel[: inject.shape[1]])
    return preimage_rank == discrete_rank


def improved_rate_targets(k: int, r: int, s: int) -> dict[str, float]:
    """Predicted convergence rates of the error columns of a refinement study.

    Field errors follow the element order r (with the mixed lowest-order rates for k >= 1)
    and the geometric terms follow h^{s+1}.
    """
    geometric = float(s + 1)
    if k == 0:
        return {
            "l2_u": float(min(r + 1, s + 1)),
            "graph_u": float(min(r, s + 1)),
            "jacobian_deviation": geometric,
            "data_error": geometric,
        }
    return {
        "l2_u": 1.0,
        "l2_sigma": 1.0,
        "jacobian_deviation": geometric,
        "data_error": geometric,
    }
