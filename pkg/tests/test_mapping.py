import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from feeclab.core import NeighborhoodError
from feeclab.geometry import (
    Sphere,
    SurfaceMesh,
    Torus,
    closest_point_jacobian,
    evaluate_geometry,
    geometry_report,
    icosahedron,
    jacobian_bounds,
    mesh_family,
    singular_values,
    tangent_lift,
    tangent_projector,
    triangle_rule,
)


def _tilted_normal(normal, rng, tilt=0.05):
    tilted = normal + tilt * rng.standard_normal(normal.shape)
    return tilted / np.linalg.norm(tilted, axis=-1)[..., None]


def test_tangent_lift_is_adjoint_of_tangent_map():
    rng = np.random.default_rng(50)
    torus = Torus()
    base = torus.point(rng.uniform(0, 2 * np.pi, 6), rng.uniform(0, 2 * np.pi, 6))
    x = base + 0.1 * torus.normal(base)
    normal_h = _tilted_normal(torus.normal(x), rng)
    x_h = np.einsum("nij,nj->ni", tangent_projector(normal_h), rng.standard_normal((6, 3)))
    y = np.einsum("nij,nj->ni", tangent_projector(torus.normal(x)), rng.standard_normal((6, 3)))
    mapped = np.einsum("nij,nj->ni", closest_point_jacobian(torus, x), x_h)
    lhs = np.einsum("ni,ni->n", mapped, y)
    rhs = np.einsum("ni,ni->n", x_h, tangent_lift(torus, x, y, normal_h))
    assert_allclose(lhs, rhs, atol=1e-12)


def test_tangent_lift_projects_normal_components(caplog):
    sphere = Sphere()
    x = np.array([[0.0, 0.0, 0.9]])
    normal_h = np.array([[0.0, 0.0, 1.0]])
    with caplog.at_level(logging.WARNING, logger="feeclab.geometry.mapping"):
        lifted = tangent_lift(sphere, x, np.array([[1.0, 0.0, 3.0]]), normal_h)
    assert "not tangent" in caplog.text
    assert_allclose(lifted, tangent_lift(sphere, x, np.array([[1.0, 0.0, 0.0]]), normal_h))


@pytest.mark.parametrize("r", (0.8, 0.95, 1.1))
def test_singular_values_of_chord_plane(r):
    x = np.array([[0.0, 0.0, r]])
    jac = np.array([[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]])
    assert_allclose(singular_values(Sphere(), x, jac), [[1 / r, 1 / r]], rtol=1e-12)


def test_singular_values_ignore_frame_choice():
    rng = np.random.default_rng(51)
    torus = Torus()
    base = torus.point(rng.uniform(0, 2 * np.pi, 5), rng.uniform(0, 2 * np.pi, 5))
    x = base - 0.2 * torus.normal(base)
    normal_h = _tilted_normal(torus.normal(x), rng, tilt=0.2)
    jac = tangent_projector(normal_h) @ rng.standard_normal((5, 3, 2))
    mixing = rng.standard_normal((5, 2, 2)) + 3 * np.eye(2)
    assert_allclose(
        singular_values(torus, x, jac @ mixing), singular_values(torus, x, jac), rtol=1e-10
    )


def test_flat_geometry_integrates_area():
    mesh = SurfaceMesh(
        vertices=np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
        triangles=np.array([[0, 1, 2]]),
    )
    rule = triangle_rule(2)
    geometry = evaluate_geometry(mesh, rule.points)
    assert geometry.sqrt_g[0] @ rule.weights == pytest.approx(1.0)
    assert_allclose(geometry.normal_h, np.broadcast_to([0, 0, 1.0], geometry.x.shape))
    assert_allclose(geometry.metric_inverse[0, 0], np.diag([0.25, 1.0]))
    with pytest.raises(NeighborhoodError):
        geometry.singular_values()


def test_exact_geometry_has_identity_tangent_map():
    sphere = Sphere()
    mesh = icosahedron(sphere)
    geometry = evaluate_geometry(mesh, triangle_rule(4).points, surface=sphere, exact=True)
    assert_allclose(geometry.delta, 0.0, atol=1e-14)
    identity = np.broadcast_to(np.eye(2), geometry.phi.shape)
    assert_allclose(geometry.phi, identity, atol=1e-12)
    assert_allclose(geometry.det_phi, 1.0, atol=1e-12)
    with pytest.raises(NeighborhoodError):
        evaluate_geometry(mesh, triangle_rule(4).points, exact=True)


def test_exact_geometry_report_has_no_gaps():
    sphere = Sphere()
    report = geometry_report(sphere, icosahedron(sphere), exact=True)
    assert report.delta_inf <= 1e-14
    assert report.normal_gap_inf <= 1e-10
    assert report.sv_range == pytest.approx((1.0, 1.0), abs=1e-12)
    assert max(report.jacobian_bound) <= 1e-11


def test_jacobian_bounds():
    assert jacobian_bounds(np.array([[1.0, 1.0]])) == (0.0, 0.0, 0.0)
    assert jacobian_bounds(np.array([[2.0, 0.5]])) == pytest.approx((0.0, 3.0, 0.0))
    low, _, high = jacobian_bounds(np.array([[1.1, 1.1], [0.9, 0.9]]))
    assert low == pytest.approx(0.21)
    assert high == pytest.approx(1 / 0.81 - 1)


@pytest.mark.parametrize("s", (1, 2))
def test_geometry_report_improves_under_refinement(s):
    sphere = Sphere()
    reports = [geometry_report(sphere, mesh) for mesh in mesh_family(sphere, 3, s=s)]
    for coarse, fine in zip(reports, reports[1:]):
        assert fine.delta_inf < coarse.delta_inf
        assert fine.normal_gap_inf < coarse.normal_gap_inf
        assert max(fine.jacobian_bound) < max(coarse.jacobian_bound)


def test_quadratic_geometry_is_closer_than_linear():
    sphere = Sphere()
    linear = mesh_family(sphere, 2, s=1, min_level=1)[0]
    quadratic = mesh_family(sphere, 2, s=2, min_level=1)[0]
    assert (
        geometry_report(sphere, quadratic).delta_inf
        < geometry_report(sphere, linear).delta_inf / 5
    )


@pytest.mark.slow
@pytest.mark.parametrize(("s", "delta_rate", "normal_rate"), ((1, 1.7, 0.9), (2, 2.6, 1.7)))
def test_geometry_rates(s, delta_rate, normal_rate):
    sphere = Sphere()
    reports = [geometry_report(sphere, m) for m in mesh_family(sphere, 4, s=s, min_level=1)]
    for coarse, fine in zip(reports, reports[1:]):
        scale = np.log(coarse.h / fine.h)
        assert np.log(coarse.delta_inf / fine.delta_inf) / scale >= delta_rate
        assert np.log(coarse.normal_gap_inf / fine.normal_gap_inf) / scale >= normal_rate
