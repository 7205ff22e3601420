"""Mixed Hodge-Laplace source and eigenvalue solvers."""

import logging
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from feeclab.core.exceptions import SolverError
from feeclab.core.hilbert import (
    coupling,
    graph_gram,
    harmonic_basis,
    require_dense_size,
    stiffness,
)
from feeclab.core.linalg import DENSE_LIMIT, SaddleFactor, SpdSolver, block, dense, left_mul
from feeclab.core.models import ComplexRep, EigenResult, Matrix, MixedSolution
from feeclab.core.validators import ComplexValidator

logger = logging.getLogger(__name__)

_validator = ComplexValidator()

EIGEN_SHIFT_RATIO = 1e-3


def _sizes(rep: ComplexRep, k: int, harmonic: np.ndarray) -> list[int]:
    return [rep.dim(k - 1), rep.dim(k), harmonic.shape[1]]


def mixed_matrix(rep: ComplexRep, k: int, harmonic: np.ndarray) -> Matrix:
    """Symmetric indefinite matrix of the mixed problem over (σ, u, p-coordinates).

    Args:
    ----
        rep: Complex
        k: Level
        harmonic: G_k-orthonormal harmonic basis Q

    Returns:
    -------
        [[-G_{k-1}, D_{k-1}ᵀG_k, 0], [G_kD_{k-1}, D_kᵀG_{k+1}D_k, G_kQ], [0, QᵀG_k, 0]]

    """
    c = coupling(rep, k) if k > 0 else None
    gq = dense(left_mul(rep.gram(k), harmonic)) if harmonic.shape[1] else None
    blocks: list[list[Optional[Matrix]]] = [
        [-rep.gram(k - 1) if k > 0 else None, c, None],
        [None if c is None else c.T, stiffness(rep, k), gq],
        [None, None if gq is None else gq.T, None],
    ]
    return block(blocks, _sizes(rep, k, harmonic), rep.is_sparse)


def _backward_error(matrix: Matrix, x: np.ndarray, rhs: np.ndarray, sizes: list[int]) -> float:
    residual = matrix @ x - rhs
    scale = abs(matrix) @ np.abs(x)
    worst = 0.0
    start = 0
    for n in sizes:
        if n == 0:
            continue
        part = slice(start, start + n)
        denominator = np.max(np.abs(scale[part])) + np.max(np.abs(rhs[part]))
        if denominator > 0:
            worst = max(worst, float(np.max(np.abs(residual[part])) / denominator))
        start += n
    return worst


def solve_mixed_hodge(
    rep: ComplexRep, k: int, f: np.ndarray, harmonic: Optional[np.ndarray] = None
) -> MixedSolution:
    """Solve the mixed Hodge-Laplace problem at level k with load f.

    Args:
    ----
        rep: Valid complex
        k: Level
        f: Level-k load coefficients
        harmonic: Precomputed G_k-orthonormal harmonic basis, computed when omitted

    Returns:
    -------
        Solution (σ, u, p) with its block backward error

    Raises:
    ------
        ComplexError: Invalid complex, level or load size
        SolverError: Assembled system is singular

    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k)
    _validator.require_vector(rep, k, f)
    q = harmonic_basis(rep, k) if harmonic is None else np.asarray(harmonic, dtype=float)
    sizes = _sizes(rep, k, q)
    matrix = mixed_matrix(rep, k, q)
    rhs = np.concatenate(
        [np.zeros(sizes[0]), np.asarray(left_mul(rep.gram(k), f), dtype=float), np.zeros(sizes[2])]
    )
    x = SaddleFactor(matrix).solve(rhs)
    residual = _backward_error(matrix, x, rhs, sizes)
    sigma, u, coords = np.split(x, [sizes[0], sizes[0] + sizes[1]])
    solution = MixedSolution(sigma=sigma, u=u, p_coords=coords, p=q @ coords, residual=residual)
    if not solution.converged:
        logger.warning("mixed solve at level %d: residual %.3e", k, residual)
    logger.debug("mixed solve at level %d: %d unknowns, residual %.3e", k, x.size, residual)
    return solution


def infsup_lower_bound(rep: ComplexRep, k: int) -> float:
    """Inf-sup constant γ of the mixed form in the product norm V^{k-1} × V^k × H^k.

    Computed as the smallest singular value of L⁻¹ B L⁻ᵀ, where B is the (unsymmetrized)
    form matrix and L L ᵀ the Cholesky factorization of the product-norm Gram.
    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k)
    require_dense_size(rep, "infsup_lower_bound")
    q = harmonic_basis(rep, k)
    sizes = _sizes(rep, k, q)
    c = dense(coupling(rep, k)) if k > 0 else None
    gq = dense(rep.gram(k)) @ q if q.shape[1] else None
    form = block(
        [
            [dense(rep.gram(k - 1)) if k > 0 else None, None if c is None else -c, None],
            [None if c is None else c.T, dense(stiffness(rep, k)), gq],
            [None, None if gq is None else -gq.T, None],
        ],
        sizes,
        sparse=False,
    )
    norm = block(
        [
            [dense(graph_gram(rep, k - 1)) if k > 0 else None, None, None],
            [None, dense(graph_gram(rep, k)), None],
            [None, None, np.eye(sizes[2])],
        ],
        sizes,
        sparse=False,
    )
    if form.size == 0:
        return np.inf
    lower = np.linalg.cholesky(0.5 * (norm + norm.T))
    weighted = sla.solve_triangular(lower, form, lower=True)
    weighted = sla.solve_triangular(lower, weighted.T, lower=True).T
    return float(np.linalg.svd(weighted, compute_uv=False)[-1])


def stability_ratio(rep: ComplexRep, k: int, f: np.ndarray) -> float:
    """Measured ‖(σ, u, p)‖_X / ‖F‖_{X*} for the load functional F(v) = ⟨f, v⟩.

    Bounded above by 1/γ for every f.
    """
    solution = solve_mixed_hodge(rep, k, f)
    energy = float(solution.u @ (graph_gram(rep, k) @ solution.u))
    if k > 0:
        energy += float(solution.sigma @ (graph_gram(rep, k - 1) @ solution.sigma))
    energy += float(solution.p_coords @ solution.p_coords)
    load = np.asarray(left_mul(rep.gram(k), f), dtype=float)
    dual = float(load @ SpdSolver(graph_gram(rep, k)).solve(load))
    if dual == 0:
        return 0.0
    return float(np.sqrt(energy / dual))


def _eigen_shift(rep: ComplexRep, k: int) -> float:
    trace_k = float(stiffness(rep, k).diagonal().sum())
    trace_g = float(rep.gram(k).diagonal().sum())
    if trace_k <= 0 or trace_g <= 0:
        return 1.0
    return EIGEN_SHIFT_RATIO * trace_k / trace_g


def _eigen_dense(rep: ComplexRep, k: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    gram = dense(rep.gram(k))
    operator = dense(stiffness(rep, k))
    if k > 0:
        c = dense(coupling(rep, k))
        operator = operator + c.T @ SpdSolver(rep.gram(k - 1)).solve(c)
    values, vectors = sla.eigh(0.5 * (operator + operator.T), gram)
    return values[:count], vectors[:, :count]


def _eigen_sparse(rep: ComplexRep, k: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    n = rep.dim(k)
    gram = sp.csc_matrix(rep.gram(k))
    energy = sp.csr_matrix(stiffness(rep, k))
    shift = _eigen_shift(rep, k)
    c = sp.csr_matrix(coupling(rep, k)) if k > 0 else None
    lower = SpdSolver(rep.gram(k - 1)) if k > 0 else None
    sizes = [rep.dim(k - 1), n]
    factor = SaddleFactor(
        block(
            [
                [-rep.gram(k - 1) if k > 0 else None, c],
                [None if c is None else c.T, energy + shift * gram],
            ],
            sizes,
            sparse=True,
        )
    )

    def matvec(v: np.ndarray) -> np.ndarray:
        out = energy @ v
        if c is not None and lower is not None:
            out = out + c.T @ lower.solve(c @ v)
        return out

    def inverse(v: np.ndarray) -> np.ndarray:
        rhs = np.concatenate([np.zeros(sizes[0]), np.ravel(v)])
        return factor.solve(rhs)[sizes[0]:]

    operator = spla.LinearOperator((n, n), matvec=matvec, dtype=float)
    shifted_inverse = spla.LinearOperator((n, n), matvec=inverse, dtype=float)
    try:
        values, vectors = spla.eigsh(
            operator, k=count, M=gram, sigma=-shift, which="LM", OPinv=shifted_inverse
        )
    except (RuntimeError, spla.ArpackError) as e:
        raise SolverError(f"Eigensolve failed at level {k}: {e}") from e
    order = np.argsort(values)
    return values[order], vectors[:, order]


def solve_hodge_eigen(rep: ComplexRep, k: int, nev: int) -> EigenResult:
    """Lowest ``nev`` nonzero eigenpairs of the mixed Hodge-Laplace eigenproblem.

    Args:
    ----
        rep: Valid complex
        k: Level
        nev: Number of nonzero eigenvalues requested

    Returns:
    -------
        Ascending eigenvalues with G_k-orthonormal u_j and σ_j = d*u_j

    Raises:
    ------
        SolverError: nev exceeds the nonharmonic dimension

    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k)
    q = harmonic_basis(rep, k)
    harmonic_count = q.shape[1]
    available = rep.dim(k) - harmonic_count
    if nev < 1 or nev > available:
        raise SolverError(
            f"Requested {nev} eigenvalues; nonharmonic dimension is {available}",
            {"nev": nev, "available": available},
        )
    count = nev + harmonic_count
    if rep.is_sparse and rep.total_dim > DENSE_LIMIT and count < rep.dim(k) - 1:
        values, vectors = _eigen_sparse(rep, k, count)
    else:
        values, vectors = _eigen_dense(rep, k, count)
    gram = rep.gram(k)
    values, vectors = values[harmonic_count:], vectors[:, harmonic_count:]
    us = vectors - q @ (q.T @ (gram @ vectors)) if harmonic_count else vectors
    norms = np.sqrt(np.einsum("ij,ij->j", us, gram @ us))
    us = us / norms
    sigmas = (
        SpdSolver(rep.gram(k - 1)).solve(coupling(rep, k) @ us)
        if k > 0
        else np.zeros((0, nev))
    )
    gram_defect = us.T @ (gram @ us) - np.eye(nev)
    residuals = np.zeros(nev)
    energy = stiffness(rep, k)
    for j in range(nev):
        lhs = energy @ us[:, j]
        if k > 0:
            lhs = lhs + coupling(rep, k).T @ sigmas[:, j]
        rhs = values[j] * (gram @ us[:, j])
        scale = max(np.linalg.norm(lhs), np.linalg.norm(rhs))
        residuals[j] = np.linalg.norm(lhs - rhs) / scale if scale > 0 else 0.0
    logger.debug("eigen at level %d: %s", k, np.array2string(values, precision=6))
    return EigenResult(
        eigenvalues=values,
        sigmas=sigmas,
        us=us,
        orthonormality_defect=float(np.max(np.abs(gram_defect))),
        residuals=residuals,
    )
