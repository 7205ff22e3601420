"""Dense and sparse linear-algebra helpers shared by the complex, crime and assembly code."""

import logging
import warnings
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from feeclab.core.exceptions import ComplexError, SolverError
from feeclab.core.models import Matrix

logger = logging.getLogger(__name__)

RANK_RTOL = 1e-10
DENSE_LIMIT = 1500
SPARSE_NULL_RTOL = 1e-9


def dense(matrix: Matrix) -> np.ndarray:
    """Return a dense ndarray view of a dense or sparse matrix."""
    if sp.issparse(matrix):
        return matrix.toarray()
    return np.asarray(matrix, dtype=float)


def mat_norm(matrix: Matrix) -> float:
    """Frobenius norm of a dense or sparse matrix."""
    if sp.issparse(matrix):
        return float(spla.norm(matrix)) if matrix.nnz else 0.0
    return float(np.linalg.norm(matrix)) if matrix.size else 0.0


def left_mul(a: Matrix, b: Matrix) -> Matrix:
    """Product a @ b that keeps sparse operands sparse and never calls ndarray @ sparse."""
    if sp.issparse(b) and not sp.issparse(a):
        return (b.T @ np.asarray(a).T).T
    return a @ b


def quad_form(a: Matrix, gram: Matrix, b: Matrix) -> np.ndarray:
    """Dense aᵀ G b for column blocks a, b."""
    return dense(left_mul(dense(a).T, left_mul(gram, dense(b))))


def range_basis(matrix: Matrix, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the column space, by thresholded SVD."""
    a = dense(matrix)
    if a.size == 0:
        return np.zeros((a.shape[0], 0))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    tol = rtol * (s[0] if s.size else 0.0)
    return u[:, s > tol] if s.size and s[0] > 0 else np.zeros((a.shape[0], 0))


def null_basis(matrix: Matrix, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the kernel, by thresholded SVD."""
    a = dense(matrix)
    n = a.shape[1]
    if a.shape[0] == 0 or n == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0:
        return np.eye(n)
    rank = int(np.sum(s > rtol * s[0]))
    return vt[rank:].T.copy()


def matrix_rank(matrix: Matrix, rtol: float = RANK_RTOL) -> int:
    """Numerical rank with the relative singular-value threshold."""
    a = dense(matrix)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0


def g_orthonormalize(vectors: np.ndarray, gram: Matrix, rtol: float = 1e-8) -> np.ndarray:
    """G-orthonormalize columns by modified Gram-Schmidt with one reorthogonalization pass.

    Columns whose norm collapses below ``rtol`` of their original norm are dropped.
    """
    basis: list[np.ndarray] = []
    for j in range(vectors.shape[1]):
        v = np.array(vectors[:, j], dtype=float)
        start = np.sqrt(max(float(v @ (gram @ v)), 0.0))
        if start == 0:
            continue
        for _ in range(2):
            for q in basis:
                v = v - float(q @ (gram @ v)) * q
        norm = np.sqrt(max(float(v @ (gram @ v)), 0.0))
        if norm <= rtol * start:
            continue
        basis.append(v / norm)
    if not basis:
        return np.zeros((vectors.shape[0], 0))
    return np.column_stack(basis)


class SpdSolver:
    """Factorization of a symmetric positive-definite Gram (Cholesky or sparse LU)."""

    def __init__(self, gram: Matrix) -> None:
        """Factor the Gram matrix.

        Args:
        ----
            gram: Symmetric positive-definite matrix

        """
        self._n = gram.shape[0]
        self._sparse = sp.issparse(gram)
        if self._n == 0:
            return
        try:
            if self._sparse:
                self._lu = spla.splu(sp.csc_matrix(gram))
            else:
                self._cho = sla.cho_factor(np.asarray(gram))
        except (np.linalg.LinAlgError, RuntimeError) as e:
            raise ComplexError(f"Gram matrix is not positive definite: {e}") from e

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve G x = rhs for a vector or a block of columns."""
        rhs = np.asarray(rhs, dtype=float)
        if self._n == 0:
            return np.zeros_like(rhs)
        if self._sparse:
            return self._lu.solve(rhs)
        return sla.cho_solve(self._cho, rhs)


def generalized_eigvalsh(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Eigenvalues of the symmetric-definite pencil (a, b), ascending."""
    if a.shape[0] == 0:
        return np.zeros(0)
    return sla.eigh(0.5 * (a + a.T), 0.5 * (b + b.T), eigvals_only=True)


def operator_norm(
    matrix: Matrix, target_gram: Matrix, source_gram: Matrix
) -> float:
    """Norm of F: (source, ⟨·,·⟩_source) → (target, ⟨·,·⟩_target)."""
    f = dense(matrix)
    if f.size == 0:
        return 0.0
    ftgf = quad_form(f, target_gram, f)
    values = generalized_eigvalsh(ftgf, dense(source_gram))
    return float(np.sqrt(max(values[-1], 0.0)))


def min_eigenvalue(gram: Matrix) -> float:
    """Smallest eigenvalue of a symmetric matrix (shift-invert for large sparse input)."""
    n = gram.shape[0]
    if n == 0:
        return np.inf
    if not sp.issparse(gram) or n <= DENSE_LIMIT:
        g = dense(gram)
        return float(np.linalg.eigvalsh(0.5 * (g + g.T))[0])
    try:
        values = spla.eigsh(sp.csc_matrix(gram), k=1, sigma=0.0, which="LM",
                            return_eigenvectors=False)
    except RuntimeError:
        return 0.0
    return float(values[0])


def sparse_null_basis(
    constraint: sp.spmatrix, start: int = 8, rtol: float = SPARSE_NULL_RTOL
) -> np.ndarray:
    """Orthonormal basis of ker(C) for a large sparse C via shift-invert on CᵀC.

    Args:
    ----
        constraint: Sparse constraint matrix C
        start: Initial number of eigenpairs requested; doubled while all are null
        rtol: Eigenvalues of CᵀC below ``rtol`` times its row-sum bound count as zero

    Returns:
    -------
        Columns spanning the numerical kernel

    """
    n = constraint.shape[1]
    normal = sp.csc_matrix(constraint.T @ constraint)
    scale = float(abs(normal).sum(axis=1).max()) if normal.nnz else 0.0
    if scale == 0:
        return np.eye(n)
    shift = 1e-8 * scale
    nev = min(start, n - 2)
    while True:
        try:
            values, vectors = spla.eigsh(normal, k=nev, sigma=-shift, which="LM")
        except RuntimeError as e:
            raise SolverError(f"Null-space eigensolve failed: {e}") from e
        order = np.argsort(values)
        values, vectors = values[order], vectors[:, order]
        null = values < rtol * scale
        if not null.all() or nev >= n - 2:
            logger.debug("sparse null space: %d of %d requested", int(null.sum()), nev)
            return vectors[:, null]
        nev = min(2 * nev, n - 2)


class SaddleFactor:
    """Factorization of a symmetric indefinite saddle-point matrix."""

    def __init__(self, matrix: Matrix) -> None:
        """Factor the matrix.

        Args:
        ----
            matrix: Symmetric indefinite matrix

        Raises:
        ------
            SolverError: Matrix is singular

        """
        self._sparse = sp.issparse(matrix)
        self._n = matrix.shape[0]
        if self._n == 0:
            return
        if self._sparse:
            try:
                self._lu = spla.splu(sp.csc_matrix(matrix))
            except RuntimeError as e:
                raise SolverError(f"Saddle-point matrix is singular: {e}") from e
        else:
            self._matrix = np.asarray(matrix, dtype=float)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve the factored system."""
        rhs = np.asarray(rhs, dtype=float)
        if self._n == 0:
            return np.zeros_like(rhs)
        if self._sparse:
            return self._lu.solve(rhs)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", sla.LinAlgWarning)
                return sla.solve(self._matrix, rhs, assume_a="sym")
        except (np.linalg.LinAlgError, sla.LinAlgWarning) as e:
            raise SolverError(f"Saddle-point matrix is singular: {e}") from e


def block(blocks: list[list[Optional[Matrix]]], sizes: list[int], sparse: bool) -> Matrix:
    """Assemble a square block matrix with block sizes ``sizes``; None entries are zero.

    Rows and columns of size zero are dropped before assembly.
    """
    keep = [i for i, n in enumerate(sizes) if n > 0]
    if sparse:
        rows = []
        for i in keep:
            row = []
            for j in keep:
                b = blocks[i][j]
                if b is None and i == j:
                    b = sp.csr_matrix((sizes[i], sizes[i]))
                row.append(None if b is None else sp.csr_matrix(b))
            rows.append(row)
        return sp.bmat(rows, format="csc")
    return np.block(
        [
            [
                np.zeros((sizes[i], sizes[j])) if blocks[i][j] is None else dense(blocks[i][j])
                for j in keep
            ]
            for i in keep
        ]
    )
