"""Hodge theory of finite-dimensional Hilbert complexes."""

import logging

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from feeclab.core.exceptions import ComplexError
from feeclab.core.linalg import (
    DENSE_LIMIT,
    SpdSolver,
    dense,
    g_orthonormalize,
    left_mul,
    mat_norm,
    null_basis,
    quad_form,
    range_basis,
    sparse_null_basis,
)
from feeclab.core.models import ComplexRep, HodgeSplit, Level, Matrix, PoincareResult
from feeclab.core.validators import ComplexValidator

logger = logging.getLogger(__name__)

_validator = ComplexValidator()


def _zeros(n: int, m: int, sparse: bool) -> Matrix:
    return sp.csr_matrix((n, m)) if sparse else np.zeros((n, m))


def _sparse_block_diag(a: Matrix, b: Matrix) -> sp.csr_matrix:
    a, b = sp.coo_matrix(a), sp.coo_matrix(b)
    return sp.csr_matrix(
        (
            np.concatenate([a.data, b.data]),
            (
                np.concatenate([a.row, b.row + a.shape[0]]),
                np.concatenate([a.col, b.col + a.shape[1]]),
            ),
        ),
        shape=(a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]),
    )


def require_dense_size(rep: ComplexRep, operation: str) -> None:
    """Refuse dense-only operations on complexes above DENSE_LIMIT."""
    if rep.total_dim > DENSE_LIMIT:
        raise ComplexError(
            f"{operation} is dense-only; complex has total dimension {rep.total_dim}",
            {"total_dim": rep.total_dim, "limit": DENSE_LIMIT},
        )


def stiffness(rep: ComplexRep, k: int) -> Matrix:
    """The form ⟨d u, d v⟩ on level k: D_kᵀ G_{k+1} D_k."""
    n = rep.dim(k)
    if k >= rep.top:
        return _zeros(n, n, rep.is_sparse)
    d = rep.diff(k)
    product = d.T @ left_mul(rep.gram(k + 1), d)
    return sp.csr_matrix(product) if rep.is_sparse else dense(product)


def coupling(rep: ComplexRep, k: int) -> Matrix:
    """The form ⟨u, d τ⟩ as an n_{k-1} × n_k matrix: D_{k-1}ᵀ G_k."""
    if k <= 0:
        return _zeros(0, rep.dim(0), rep.is_sparse)
    product = rep.diff(k - 1).T @ rep.gram(k)
    return sp.csr_matrix(product) if rep.is_sparse else dense(product)


def graph_gram(rep: ComplexRep, k: int) -> Matrix:
    """Gram matrix of the V^k graph inner product ⟨u, v⟩ + ⟨du, dv⟩."""
    return rep.gram(k) + stiffness(rep, k)


def adjoint_differential(rep: ComplexRep, k: int) -> np.ndarray:
    """Matrix of the adjoint d*_k = G_{k-1}^{-1} D_{k-1}ᵀ G_k.

    Args:
    ----
        rep: Valid complex
        k: Level, 1 <= k <= m

    Returns:
    -------
        Dense n_{k-1} × n_k matrix

    Raises:
    ------
        ComplexError: Invalid complex or level out of range

    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k, low=1)
    return SpdSolver(rep.gram(k - 1)).solve(dense(coupling(rep, k)))


def apply_adjoint(rep: ComplexRep, k: int, y: np.ndarray) -> np.ndarray:
    """Apply d*_k to a level-k vector without forming the matrix."""
    if k <= 0:
        return np.zeros(0)
    return SpdSolver(rep.gram(k - 1)).solve(coupling(rep, k) @ np.asarray(y, dtype=float))


def harmonic_basis(rep: ComplexRep, k: int) -> np.ndarray:
    """G_k-orthonormal basis of H^k = Z^k ∩ B^{k⊥}.

    Small complexes use dense SVD; large sparse ones use shift-invert on the stacked
    constraint [D_k; D_{k-1}ᵀG_k].

    Args:
    ----
        rep: Valid complex
        k: Level

    Returns:
    -------
        n_k × b_k matrix of basis columns (b_k may be zero)

    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k)
    gram = rep.gram(k)
    if rep.is_sparse and rep.total_dim > DENSE_LIMIT:
        d = sp.csr_matrix(rep.diff(k))
        c = sp.csr_matrix(coupling(rep, k))
        d_norm, c_norm = mat_norm(d), mat_norm(c)
        if d_norm > 0 and c_norm > 0:
            c = c * (d_norm / c_norm)
        rows = [block for block in (d, c) if block.shape[0]]
        if rows:
            candidates = sparse_null_basis(sp.vstack(rows).tocsr())
        else:
            candidates = np.eye(rep.dim(k))
    else:
        cycles = null_basis(rep.diff(k))
        constraint = dense(coupling(rep, k)) @ cycles
        candidates = cycles @ null_basis(constraint) if constraint.shape[0] else cycles
    basis = g_orthonormalize(candidates, gram)
    logger.debug("harmonic basis at level %d: %d vectors", k, basis.shape[1])
    return basis


def betti_numbers(rep: ComplexRep) -> tuple[int, ...]:
    """Dimensions of the harmonic spaces at every level."""
    return tuple(harmonic_basis(rep, k).shape[1] for k in range(rep.top + 1))


def hodge_decompose(rep: ComplexRep, k: int, w: np.ndarray) -> HodgeSplit:
    """Split w into boundary, harmonic and coexact parts.

    Args:
    ----
        rep: Valid complex of total dimension at most DENSE_LIMIT
        k: Level
        w: Level-k vector

    Returns:
    -------
        The strong Hodge decomposition of w

    Raises:
    ------
        ComplexError: Invalid complex, bad level or dimension mismatch

    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k)
    _validator.require_vector(rep, k, w)
    require_dense_size(rep, "hodge_decompose")
    w = np.asarray(w, dtype=float)
    gram = dense(rep.gram(k))
    gw = gram @ w
    boundary = np.zeros_like(w)
    if k > 0:
        span = range_basis(rep.diff(k - 1))
        if span.shape[1]:
            coefficients = sla.solve(span.T @ gram @ span, span.T @ gw, assume_a="pos")
            boundary = span @ coefficients
    q = harmonic_basis(rep, k)
    harmonic = q @ (q.T @ gw)
    return HodgeSplit(boundary=boundary, harmonic=harmonic, coexact=w - boundary - harmonic)


def poincare_constant(rep: ComplexRep, k: int) -> PoincareResult:
    """Smallest c_P with ‖v‖_V <= c_P ‖D_k v‖ on the G-orthogonal complement of ker D_k.

    Returns a zero constant flagged ``degenerate`` when that complement is trivial.
    """
    _validator.require_valid(rep)
    _validator.require_level(rep, k)
    require_dense_size(rep, "poincare_constant")
    if k == rep.top:
        return PoincareResult(constant=0.0, achiever=None, degenerate=True)
    gram = dense(rep.gram(k))
    cocycles = SpdSolver(gram).solve(range_basis(dense(rep.diff(k)).T))
    if cocycles.shape[1] == 0:
        return PoincareResult(constant=0.0, achiever=None, degenerate=True)
    energy = quad_form(cocycles, stiffness(rep, k), cocycles)
    full = quad_form(cocycles, gram, cocycles) + energy
    values, vectors = sla.eigh(0.5 * (full + full.T), 0.5 * (energy + energy.T))
    achiever = cocycles @ vectors[:, -1]
    return PoincareResult(
        constant=float(np.sqrt(values[-1])), achiever=achiever, degenerate=False
    )


def direct_sum(first: ComplexRep, second: ComplexRep) -> ComplexRep:
    """Block-diagonal sum of two complexes with the same number of levels."""
    if first.top != second.top:
        raise ComplexError(
            "Direct sum needs equal level counts", {"levels": [first.top, second.top]}
        )
    sparse = first.is_sparse or second.is_sparse
    levels = []
    for a, b in zip(first.levels, second.levels):
        if sparse:
            gram = _sparse_block_diag(a.gram, b.gram)
            diff = _sparse_block_diag(a.diff, b.diff)
        else:
            gram = sla.block_diag(a.gram, b.gram)
            diff = sla.block_diag(a.diff, b.diff)
            diff = diff.reshape(a.diff.shape[0] + b.diff.shape[0], a.dim + b.dim)
        levels.append(Level(dim=a.dim + b.dim, gram=gram, diff=diff))
    return ComplexRep(levels=tuple(levels))
