import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from feeclab.core import NeighborhoodError, ValidationError
from feeclab.geometry import (
    LevelSetSurface,
    Plane,
    Sphere,
    Torus,
    closest_point,
    closest_point_jacobian,
    get_surface,
    parallel_curvatures,
    shape_operator,
    tangent_projector,
)

SURFACES = (Sphere(), Sphere(2.5), Torus())


def _near(surface, rng, count=20, spread=0.3):
    if isinstance(surface, Torus):
        base = surface.point(rng.uniform(0, 2 * np.pi, count), rng.uniform(0, 2 * np.pi, count))
    else:
        base = rng.standard_normal((count, 3))
        base = surface.radius * base / np.linalg.norm(base, axis=1)[:, None]
    offsets = rng.uniform(-spread, spread, count) * surface.reach
    return base + offsets[:, None] * surface.normal(base)


@pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.name)
def test_normal_is_unit_and_in_hessian_kernel(surface):
    x = _near(surface, np.random.default_rng(1))
    normal = surface.normal(x)
    assert_allclose(np.linalg.norm(normal, axis=1), 1.0, atol=1e-12)
    hessian = surface.hessian(x)
    assert_allclose(np.einsum("nij,nj->ni", hessian, normal), 0.0, atol=1e-10)
    assert_allclose(hessian, np.swapaxes(hessian, 1, 2), atol=1e-12)


@pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.name)
def test_closest_point_decomposition(surface):
    x = _near(surface, np.random.default_rng(2))
    a = closest_point(surface, x)
    assert_allclose(surface.distance(a), 0.0, atol=1e-12)
    assert_allclose(a + surface.distance(x)[:, None] * surface.normal(x), x, atol=1e-12)


def test_sphere_closest_point_is_radial():
    x = np.array([[0.0, 0.0, 1.3], [0.3, -0.4, 0.0]])
    assert_allclose(Sphere().closest_point(x), [[0, 0, 1], [0.6, -0.8, 0]], atol=1e-15)


def test_sphere_shape_operator():
    x = np.array([[0.0, 0.0, 2.0]])
    s = shape_operator(Sphere(), x)[0]
    assert_allclose(s, -np.diag([0.5, 0.5, 0.0]), atol=1e-15)


@pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.name)
def test_closest_point_jacobian_matches_finite_differences(surface):
    x = _near(surface, np.random.default_rng(3), count=4)
    jac = closest_point_jacobian(surface, x)
    for step in (1e-4, 5e-5):
        columns = [
            (surface.closest_point(x + step * e) - surface.closest_point(x - step * e))
            / (2 * step)
            for e in np.eye(3)
        ]
        fd = np.stack(columns, axis=-1)
        assert np.abs(fd - jac).max() <= 10 * step**2 * max(1.0, 1 / surface.reach**3)


def test_closest_point_jacobian_is_projector_on_surface():
    surface = Torus()
    a = surface.point(np.array([0.3, 1.7]), np.array([2.1, -0.4]))
    assert_allclose(
        closest_point_jacobian(surface, a), tangent_projector(surface.normal(a)), atol=1e-12
    )


@settings(max_examples=30, deadline=None)
@given(
    theta=st.floats(0.0, 2 * np.pi),
    phi=st.floats(0.0, 2 * np.pi),
    offset=st.floats(-0.4, 0.4),
)
def test_torus_curvature_relation(theta, phi, offset):
    torus = Torus()
    base = torus.point(np.array(theta), np.array(phi))
    x = base + offset * torus.minor * torus.normal(base)
    measured, predicted = parallel_curvatures(torus, x)
    assert_allclose(measured, predicted, rtol=1e-9, atol=1e-9)


def test_sphere_curvature_relation():
    measured, predicted = parallel_curvatures(Sphere(), np.array([0.0, 1.2, 0.0]))
    assert_allclose(measured, [1 / 1.2, 1 / 1.2], atol=1e-12)
    assert_allclose(predicted, measured, atol=1e-12)


def test_closest_point_documented_values():
    assert_allclose(Sphere().closest_point(np.array([[2.0, 0.0, 0.0]])), [[1.0, 0.0, 0.0]])
    assert_allclose(Sphere().distance(np.array([[2.0, 0.0, 0.0]])), [1.0])
    assert_allclose(closest_point(Torus(), np.array([[2.7, 0.0, 0.0]])), [[2.5, 0.0, 0.0]],
                    atol=1e-14)


def test_sphere_neighborhood_is_one_sided():
    far = np.array([[0.0, 30.0, 40.0]])
    assert_allclose(closest_point(Sphere(), far), [[0.0, 0.6, 0.8]], atol=1e-14)
    assert_allclose(Sphere(2.0).check_neighborhood(np.array([[0.0, 0.0, 0.5]])), [-1.5])
    with pytest.raises(NeighborhoodError):
        Torus().closest_point(np.array([[3.0, 0.0, 0.0]]))


def test_outside_neighborhood_raises():
    with pytest.raises(NeighborhoodError) as info:
        Sphere().closest_point(np.array([[0.0, 0.0, 0.0]]))
    assert info.value.distance == pytest.approx(1.0)
    with pytest.raises(NeighborhoodError):
        closest_point_jacobian(Torus(), np.array([[2.0, 0.0, 1.1]]))


def test_plane_is_flat():
    plane = Plane((0.0, 0.0, 2.0), offset=1.0)
    x = np.array([[0.2, 0.1, 3.0]])
    assert_allclose(plane.distance(x), [2.0])
    assert_allclose(plane.closest_point(x), [[0.2, 0.1, 1.0]])
    assert_allclose(shape_operator(plane, x), 0.0)


def test_level_set_sphere_matches_closed_form():
    sphere = Sphere()
    level_set = LevelSetSurface(
        function=lambda a: float(a @ a - 1.0),
        gradient=lambda a: 2.0 * a,
        reach=1.0,
        diameter=2.0,
    )
    x = _near(sphere, np.random.default_rng(4), count=5)
    assert_allclose(level_set.closest_point(x), sphere.closest_point(x), atol=1e-12)
    assert_allclose(level_set.distance(x), sphere.distance(x), atol=1e-12)
    assert_allclose(level_set.normal(x), sphere.normal(x), atol=1e-12)
    assert_allclose(level_set.hessian(x), sphere.hessian(x), atol=1e-6)


def test_invalid_surfaces():
    with pytest.raises(ValidationError):
        Sphere(-1.0)
    with pytest.raises(ValidationError):
        Torus(1.0, 2.0)
    with pytest.raises(ValidationError):
        get_surface("klein")
