import numpy as np
import pytest
from numpy.testing import assert_allclose

from feeclab.core import NeighborhoodError, ValidationError
from feeclab.derham import (
    FormCallback,
    adjoint_load,
    adjoint_moments,
    assemble,
    canonical_interpolate,
    error_norms,
    pullback_load,
    sphere_solution,
    sphere_spectrum,
)
from feeclab.geometry import Sphere, icosahedron, mesh_family


@pytest.fixture(scope="module")
def sphere_level1():
    sphere = Sphere()
    return sphere, mesh_family(sphere, 2, min_level=1)[0]


@pytest.mark.parametrize("k", (0, 1, 2))
def test_adjoint_load_matches_pullback_under_exact_geometry(sphere_level1, k):
    sphere, mesh = sphere_level1
    assembled = assemble(mesh, surface=sphere, exact=True)
    f = sphere_solution(k, ell=2).f
    assert_allclose(
        adjoint_load(assembled, f, k), pullback_load(assembled, f, k), rtol=1e-9, atol=1e-10
    )


def test_adjoint_and_pullback_loads_differ_on_flat_mesh(sphere_level1):
    sphere, mesh = sphere_level1
    assembled = assemble(mesh, surface=sphere)
    f = sphere_solution(0, ell=2).f
    pulled = pullback_load(assembled, f, 0)
    gap = np.abs(adjoint_load(assembled, f, 0) - pulled).max()
    assert 0 < gap < 0.25 * np.abs(pulled).max()


def test_interpolated_load_matches_canonical_interpolant(sphere_level1):
    sphere, mesh = sphere_level1
    assembled = assemble(mesh, surface=sphere)
    f = sphere_solution(1, ell=1).f
    assert_allclose(
        pullback_load(assembled, f, 1, project=False),
        canonical_interpolate(f, mesh, 1, surface=sphere),
    )


def test_adjoint_moments_of_constant_is_area(sphere_level1):
    sphere, mesh = sphere_level1
    assembled = assemble(mesh, surface=sphere)
    constant = FormCallback(0, lambda x: np.ones(len(x)))
    assert adjoint_moments(assembled, constant, 0).sum() == pytest.approx(4 * np.pi, rel=1e-4)


def test_loads_check_degree_and_surface():
    mesh = icosahedron()
    f = sphere_solution(0).f
    with pytest.raises(ValidationError):
        pullback_load(assemble(mesh, surface=Sphere()), f, 1)
    with pytest.raises(NeighborhoodError):
        adjoint_load(assemble(mesh), f, 0)


def test_zero_dofs_give_exact_norms(sphere_level1):
    sphere, mesh = sphere_level1
    assembled = assemble(mesh, surface=sphere, exact=True)
    u = sphere_solution(0, ell=1).u
    l2, graph = error_norms(assembled, u, np.zeros(assembled.rep.dim(0)), 0)
    assert l2 == pytest.approx(np.sqrt(4 * np.pi / 3), rel=1e-3)
    assert graph == pytest.approx(np.sqrt(8 * np.pi / 3), rel=1e-3)


def test_interpolant_error_is_small_and_top_level_has_no_derivative(sphere_level1):
    sphere, mesh = sphere_level1
    assembled = assemble(mesh, surface=sphere)
    u = sphere_solution(2, ell=1).u
    dofs = canonical_interpolate(u, mesh, 2, surface=sphere)
    l2, graph = error_norms(assembled, u, dofs, 2)
    assert l2 < 0.5 * np.sqrt(4 * np.pi / 3)
    assert graph == 0.0
    with pytest.raises(ValidationError):
        error_norms(assembled, u, dofs[:-1], 2)
    with pytest.raises(ValidationError):
        error_norms(assembled, u, dofs, 1)


@pytest.mark.parametrize("ell", (1, 2, 3, 4))
def test_sphere_solution_is_an_eigenform(ell):
    rng = np.random.default_rng(70)
    x = rng.standard_normal((10, 3))
    x /= np.linalg.norm(x, axis=1)[:, None]
    for k in range(3):
        solution = sphere_solution(k, ell)
        assert solution.eigenvalue == ell * (ell + 1)
        assert_allclose(solution.f.ambient(x), solution.eigenvalue * solution.u.ambient(x))
        assert_allclose(solution.p.ambient(x), 0.0)
        if k == 1:
            gradient = solution.u.ambient(x)
            assert_allclose(np.einsum("ij,ij->i", gradient, x), 0.0, atol=1e-14)
            assert_allclose(solution.sigma.d.ambient(x), solution.f.ambient(x))
        if k == 2:
            sigma = solution.sigma.ambient(x)
            assert_allclose(np.einsum("ij,ij->i", sigma, x), 0.0, atol=1e-14)
            assert_allclose(solution.sigma.d.ambient(x), solution.f.ambient(x))


def test_sphere_solution_scales_with_radius():
    solution = sphere_solution(0, ell=2, radius=2.0)
    assert solution.eigenvalue == pytest.approx(1.5)
    with pytest.raises(ValidationError):
        sphere_solution(0, ell=5)
    with pytest.raises(ValidationError):
        sphere_solution(3)


def test_sphere_spectrum_multiplicities():
    assert_allclose(sphere_spectrum(0, 4), [2, 2, 2, 6])
    assert_allclose(sphere_spectrum(2, 9), [2] * 3 + [6] * 5 + [12])
    assert_allclose(sphere_spectrum(1, 7), [2] * 6 + [6])
    assert_allclose(sphere_spectrum(0, 3, radius=2.0), [0.5] * 3)
