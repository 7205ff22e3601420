"""The Jacobian operator J_h and the modified complex i_h*W."""

import logging

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from feeclab.core.exceptions import ComplexError, MorphismError, SolverError
from feeclab.core.hilbert import harmonic_basis
from feeclab.core.linalg import DENSE_LIMIT, SpdSolver, dense, quad_form
from feeclab.core.models import ComplexRep, Matrix
from feeclab.crimes.models import CrimePair, JacobianOp

logger = logging.getLogger(__name__)

RANK_TOL = 1e-12


def pulled_back_gram(pair: CrimePair, k: int) -> np.ndarray:
    """Ĝ_k = I_kᵀ G_k I_k, the true inner product restricted to i_h W_h."""
    injection = pair.injection.maps[k]
    gram = quad_form(injection, pair.true_complex.gram(k), injection)
    return 0.5 * (gram + gram.T)


def jacobian_from_grams(k: int, true_gram: Matrix, gram: Matrix) -> JacobianOp:
    """Build J_k = G^{-1}Ĝ and its deviation max |1 − λ| over the pencil (Ĝ, G).

    Large sparse pencils use ``eigsh`` on (Ĝ − G, G) and do not form J.

    Args:
    ----
        k: Level
        true_gram: Pulled-back Gram Ĝ_k
        gram: Discrete Gram G_{h,k}

    Returns:
    -------
        The Jacobian operator

    Raises:
    ------
        MorphismError: Ĝ_k is not positive definite (rank-deficient injection)

    """
    n = gram.shape[0]
    if n == 0:
        return JacobianOp(level=k, deviation=0.0, true_gram=true_gram, gram=gram,
                          matrix=np.zeros((0, 0)))
    if sp.issparse(gram) and n > DENSE_LIMIT:
        difference = sp.csc_matrix(true_gram - gram)
        try:
            values = spla.eigsh(difference, k=2, M=sp.csc_matrix(gram), which="BE",
                                return_eigenvectors=False)
        except (RuntimeError, spla.ArpackError) as e:
            raise SolverError(f"Jacobian eigensolve failed at level {k}: {e}") from e
        low, high = 1.0 + float(values.min()), 1.0 + float(values.max())
        matrix = None
    else:
        g, gh = dense(gram), dense(true_gram)
        values = sla.eigh(gh, g, eigvals_only=True)
        low, high = float(values[0]), float(values[-1])
        matrix = SpdSolver(g).solve(gh)
    if low <= RANK_TOL * max(high, 1.0):
        raise MorphismError(f"Injection is rank deficient at level {k}", k)
    deviation = max(abs(1.0 - low), abs(1.0 - high))
    logger.debug("jacobian at level %d: spectrum [%.6g, %.6g]", k, low, high)
    return JacobianOp(
        level=k, deviation=deviation, true_gram=true_gram, gram=gram, matrix=matrix,
        spectrum=(low, high),
    )


def jacobian(pair: CrimePair, k: int) -> JacobianOp:
    """Jacobian operator of a crime pair at level k."""
    if not 0 <= k <= pair.top:
        raise ComplexError(f"Level {k} outside 0..{pair.top}", {"level": k})
    return jacobian_from_grams(k, pulled_back_gram(pair, k), pair.approx_complex.gram(k))


def modified_complex(pair: CrimePair) -> ComplexRep:
    """The approximating complex with its Grams replaced by Ĝ_k (isometric to i_h W_h)."""
    return pair.approx_complex.with_grams(
        [pulled_back_gram(pair, k) for k in range(pair.top + 1)]
    )


def adjoint_injection(pair: CrimePair, k: int, f: np.ndarray) -> np.ndarray:
    """i_h* f = G_{h,k}^{-1} I_kᵀ G_k f.

    Raises
    ------
        ComplexError: f does not match the true level-k dimension

    """
    f = np.asarray(f, dtype=float)
    if f.shape != (pair.true_complex.dim(k),):
        raise ComplexError(
            f"Expected a vector of length {pair.true_complex.dim(k)} at level {k}",
            {"level": k},
        )
    rhs = pair.injection.maps[k].T @ (pair.true_complex.gram(k) @ f)
    return SpdSolver(pair.approx_complex.gram(k)).solve(rhs)


def modified_harmonic_basis(pair: CrimePair, k: int) -> np.ndarray:
    """Basis of H′_h^k: discrete cocycles whose images are orthogonal to i_h B_h^k in W."""
    return harmonic_basis(modified_complex(pair), k)
