import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp
from numpy.testing import assert_allclose

from feeclab.core import (
    ComplexError,
    ComplexRep,
    SolverError,
    direct_sum,
    harmonic_basis,
    infsup_lower_bound,
    random_complex,
    solve_hodge_eigen,
    solve_mixed_hodge,
    stability_ratio,
)
from feeclab.core.sampling import LevelLayout, random_gram, sample_form

ZERO_EIGENVALUE = 1e-9


def operator_spectrum(rep, k):
    """Eigenpairs of the Hodge Laplacian pencil (L_k, G_k), G_k-orthonormal."""
    gram = np.asarray(rep.gram(k))
    operator = np.zeros_like(gram)
    if k < rep.top:
        d = np.asarray(rep.diff(k))
        operator += d.T @ np.asarray(rep.gram(k + 1)) @ d
    if k > 0:
        c = np.asarray(rep.diff(k - 1)).T @ gram
        operator += c.T @ np.linalg.solve(np.asarray(rep.gram(k - 1)), c)
    return sla.eigh(0.5 * (operator + operator.T), gram)


def oracle_solution(rep, k, f):
    values, vectors = operator_spectrum(rep, k)
    scale = max(1.0, float(values.max(initial=0.0)))
    weights = vectors.T @ np.asarray(rep.gram(k)) @ f
    zero = values <= ZERO_EIGENVALUE * scale
    u = vectors[:, ~zero] @ (weights[~zero] / values[~zero])
    p = vectors[:, zero] @ weights[zero]
    sigma = np.zeros(0)
    if k > 0:
        c = np.asarray(rep.diff(k - 1)).T @ np.asarray(rep.gram(k))
        sigma = np.linalg.solve(np.asarray(rep.gram(k - 1)), c @ u)
    return sigma, u, p


def test_mixed_solve_matches_spectral_oracle():
    rng = np.random.default_rng(20)
    for _ in range(50):
        rep = random_complex(rng)
        k = int(rng.integers(0, rep.top + 1))
        f = rng.standard_normal(rep.dim(k))
        solution = solve_mixed_hodge(rep, k, f)
        sigma, u, p = oracle_solution(rep, k, f)
        scale = max(1.0, np.abs(f).max())
        assert solution.converged
        assert_allclose(solution.u, u, atol=1e-9 * scale * max(1.0, np.abs(u).max()))
        assert_allclose(solution.p, p, atol=1e-9 * scale)
        if k > 0:
            tol = 1e-9 * scale * max(1.0, np.abs(sigma).max())
            assert_allclose(solution.sigma, sigma, atol=tol)


def test_mixed_solution_is_orthogonal_to_harmonics():
    rng = np.random.default_rng(21)
    rep = random_complex(rng)
    for k in range(rep.top + 1):
        solution = solve_mixed_hodge(rep, k, rng.standard_normal(rep.dim(k)))
        q = harmonic_basis(rep, k)
        assert_allclose(q.T @ np.asarray(rep.gram(k)) @ solution.u, 0.0, atol=1e-9)
        assert solution.residual <= 1e-9


def test_harmonic_load_gives_zero_u():
    rng = np.random.default_rng(22)
    layouts = (LevelLayout(0, 1, 2), LevelLayout(2, 2, 1), LevelLayout(1, 0, 0))
    grams = [random_gram(rng, layout.dim) for layout in layouts]
    rep = sample_form(rng, layouts=layouts).complex(grams)
    k = 1
    q = harmonic_basis(rep, k)
    solution = solve_mixed_hodge(rep, k, q[:, 0])
    assert_allclose(solution.u, 0.0, atol=1e-10)
    assert_allclose(solution.p, q[:, 0], atol=1e-10)


def test_mixed_solve_accepts_sparse_complex():
    rng = np.random.default_rng(23)
    rep = random_complex(rng)
    sparse = ComplexRep.from_matrices(
        [sp.csr_matrix(rep.gram(k)) for k in range(rep.top + 1)],
        [rep.diff(k) for k in range(rep.top)],
    )
    f = rng.standard_normal(rep.dim(1))
    assert_allclose(
        solve_mixed_hodge(sparse, 1, f).u, solve_mixed_hodge(rep, 1, f).u, atol=1e-10
    )


def test_mixed_solve_rejects_wrong_load():
    rep = random_complex(np.random.default_rng(24))
    with pytest.raises(ComplexError):
        solve_mixed_hodge(rep, 0, np.zeros(rep.dim(0) + 2))


def test_stability_ratio_is_bounded_by_infsup():
    rng = np.random.default_rng(25)
    rep = random_complex(rng)
    for k in range(rep.top + 1):
        gamma = infsup_lower_bound(rep, k)
        assert gamma > 0
        for _ in range(5):
            ratio = stability_ratio(rep, k, rng.standard_normal(rep.dim(k)))
            assert ratio <= (1 + 1e-8) / gamma


def test_eigen_matches_operator_spectrum():
    rng = np.random.default_rng(26)
    rep = random_complex(rng)
    k = 1
    values, _ = operator_spectrum(rep, k)
    nonzero = values[values > ZERO_EIGENVALUE * max(1.0, values.max())]
    if nonzero.size == 0:
        pytest.skip("no nonzero spectrum at this level")
    nev = min(3, nonzero.size)
    result = solve_hodge_eigen(rep, k, nev)
    assert_allclose(result.eigenvalues, nonzero[:nev], rtol=1e-8)
    assert result.orthonormality_defect <= 1e-8
    q = harmonic_basis(rep, k)
    assert_allclose(q.T @ np.asarray(rep.gram(k)) @ result.us, 0.0, atol=1e-8)


def test_eigen_direct_sum_doubles_multiplicities():
    rep = random_complex(np.random.default_rng(27))
    k = 0
    single = operator_spectrum(rep, k)[0]
    nonzero = single[single > ZERO_EIGENVALUE * max(1.0, single.max())]
    if nonzero.size == 0:
        pytest.skip("no nonzero spectrum at this level")
    doubled = solve_hodge_eigen(direct_sum(rep, rep), k, 2 * nonzero.size)
    assert_allclose(doubled.eigenvalues, np.repeat(nonzero, 2), rtol=1e-8)


def test_eigen_rejects_too_many_values():
    rep = random_complex(np.random.default_rng(28))
    available = rep.dim(0) - harmonic_basis(rep, 0).shape[1]
    with pytest.raises(SolverError):
        solve_hodge_eigen(rep, 0, available + 1)
