"""Discrete and modified mixed problems and the error budget of a crime pair."""

import logging
from typing import Optional

import numpy as np

from feeclab.core.exceptions import SolverError
from feeclab.core.hilbert import graph_gram, harmonic_basis, hodge_decompose
from feeclab.core.linalg import SpdSolver, dense
from feeclab.core.models import ComplexRep, Matrix, MixedSolution
from feeclab.core.solvers import solve_hodge_eigen, solve_mixed_hodge
from feeclab.crimes.jacobian import adjoint_injection, jacobian, modified_complex
from feeclab.crimes.models import CrimePair, CrimeReport, EigenComparison

logger = logging.getLogger(__name__)


def _norm(gram: Matrix, x: np.ndarray) -> float:
    return float(np.sqrt(max(float(x @ (gram @ x)), 0.0)))


def _distance_to_range(basis: np.ndarray, gram: np.ndarray, x: np.ndarray) -> float:
    """Distance in the ``gram`` norm from x to the column span of ``basis``."""
    total = float(x @ gram @ x)
    if basis.shape[1] == 0:
        return float(np.sqrt(max(total, 0.0)))
    moment = basis.T @ (gram @ x)
    projected = float(moment @ SpdSolver(basis.T @ gram @ basis).solve(moment))
    return float(np.sqrt(max(total - projected, 0.0)))


def solve_discrete_mixed(pair: CrimePair, k: int, f_h: np.ndarray) -> MixedSolution:
    """Mixed problem on the approximating complex with data f_h."""
    return solve_mixed_hodge(pair.approx_complex, k, f_h)


def _modified_solve(
    modified: ComplexRep, k: int, rhs: np.ndarray, harmonic: Optional[np.ndarray] = None
) -> MixedSolution:
    load = SpdSolver(modified.gram(k)).solve(rhs)
    return solve_mixed_hodge(modified, k, load, harmonic=harmonic)


def solve_modified_mixed(pair: CrimePair, k: int, f: np.ndarray) -> MixedSolution:
    """Mixed problem on W_h with the J_h-weighted inner products and load ⟨i_h* f, ·⟩_h.

    Equivalent to the mixed problem on the subcomplex i_h V_h ⊂ V pulled back through i_h.
    """
    rhs = pair.injection.maps[k].T @ (pair.true_complex.gram(k) @ np.asarray(f, dtype=float))
    return _modified_solve(modified_complex(pair), k, rhs)


def mu_gap(pair: CrimePair, k: int) -> float:
    """μ = sup over unit harmonic r of ‖(I − i_h π_h) r‖ in the true W-norm."""
    q = harmonic_basis(pair.true_complex, k)
    if q.shape[1] == 0:
        return 0.0
    gram = dense(pair.true_complex.gram(k))
    residual = q - pair.injection.maps[k] @ (pair.projection.maps[k] @ q)
    values = np.linalg.eigvalsh(residual.T @ gram @ residual)
    return float(np.sqrt(max(values[-1], 0.0)))


def solution_gap(rep: ComplexRep, k: int, a: MixedSolution, b: MixedSolution) -> float:
    """‖σ − σ′‖_V + ‖u − u′‖_V + ‖p − p′‖ in the norms of ``rep``."""
    total = _norm(graph_gram(rep, k), a.u - b.u) + _norm(rep.gram(k), a.p - b.p)
    if k > 0:
        total += _norm(graph_gram(rep, k - 1), a.sigma - b.sigma)
    return total


def crime_report(
    pair: CrimePair, k: int, f: np.ndarray, f_h: Optional[np.ndarray] = None
) -> CrimeReport:
    """Solve the true, discrete and modified problems and measure every error term.

    Args:
    ----
        pair: Crime pair
        k: Level
        f: True load
        f_h: Discrete load, i_h* f when omitted

    Returns:
    -------
        The error budget

    """
    f = np.asarray(f, dtype=float)
    true, approx = pair.true_complex, pair.approx_complex
    pulled = adjoint_injection(pair, k, f)
    f_h = pulled if f_h is None else np.asarray(f_h, dtype=float)

    exact = solve_mixed_hodge(true, k, f)
    discrete = solve_discrete_mixed(pair, k, f_h)
    modified = solve_modified_mixed(pair, k, f)
    inject = pair.injection.maps

    gram_k = dense(true.gram(k))
    graph_k = dense(graph_gram(true, k))
    lhs = _norm(graph_k, exact.u - inject[k] @ discrete.u)
    lhs += _norm(gram_k, exact.p - inject[k] @ discrete.p)
    best = _distance_to_range(inject[k], graph_k, exact.u)
    best += _distance_to_range(inject[k], graph_k, exact.p)
    if k > 0:
        graph_prev = dense(graph_gram(true, k - 1))
        lhs += _norm(graph_prev, exact.sigma - inject[k - 1] @ discrete.sigma)
        best += _distance_to_range(inject[k - 1], graph_prev, exact.sigma)
    mu = mu_gap(pair, k)
    if mu > 0:
        boundary = hodge_decompose(true, k, exact.u).boundary
        best += mu * _distance_to_range(inject[k], graph_k, boundary)

    data_error = _norm(dense(approx.gram(k)), f_h - pulled)
    geometry_error = jacobian(pair, k).deviation * _norm(gram_k, f)
    perturbation = solution_gap(approx, k, discrete, modified)
    rhs = best + data_error + geometry_error
    if rhs > 0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0 else np.inf
    crimes = data_error + geometry_error
    report = CrimeReport(
        lhs=lhs,
        best_approx=best,
        data_error=data_error,
        geometry_error=geometry_error,
        mu=mu,
        ratio=float(ratio),
        perturbation=perturbation,
        perturbation_constant=perturbation / crimes if crimes > 0 else 0.0,
    )
    logger.debug("crime report at level %d: %s", k, report.to_dict())
    return report


def eigen_convergence_report(pair: CrimePair, k: int, nev: int) -> EigenComparison:
    """Compare true, discrete and modified spectra and the solution-operator gap.

    The gap is max ‖i_h K_h π_h f − i_h K′_h π_h f‖ / ‖f‖ over a random sample basis of
    the true level, where K_h and K′_h map data to the u-component of the discrete and
    modified solutions.

    Raises
    ------
        SolverError: nev exceeds the nonharmonic dimension of the approximating complex

    """
    approx = pair.approx_complex
    modified = modified_complex(pair)
    discrete_values = solve_hodge_eigen(approx, k, nev).eigenvalues
    modified_values = solve_hodge_eigen(modified, k, nev).eigenvalues
    try:
        true_values = solve_hodge_eigen(pair.true_complex, k, nev).eigenvalues
    except SolverError:
        true_values = np.zeros(0)

    true_gram = dense(pair.true_complex.gram(k))
    rng = np.random.default_rng(0)
    samples = rng.standard_normal((pair.true_complex.dim(k), pair.true_complex.dim(k)))
    inject, project = pair.injection.maps[k], pair.projection.maps[k]
    discrete_harmonic = harmonic_basis(approx, k)
    modified_harmonic = harmonic_basis(modified, k)
    gap = 0.0
    for f in samples.T:
        g = project @ f
        load = approx.gram(k) @ g
        u = solve_mixed_hodge(approx, k, g, harmonic=discrete_harmonic).u
        u_mod = _modified_solve(modified, k, load, harmonic=modified_harmonic).u
        size = _norm(true_gram, f)
        if size > 0:
            gap = max(gap, _norm(true_gram, inject @ (u - u_mod)) / size)
    return EigenComparison(
        true_values=true_values,
        discrete_values=discrete_values,
        modified_values=modified_values,
        operator_gap=gap,
        deviation=jacobian(pair, k).deviation,
    )

