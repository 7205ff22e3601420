from math import factorial

import numpy as np
import pytest
from numpy.testing import assert_allclose

from feeclab.core import NeighborhoodError, ValidationError
from feeclab.geometry import (
    Sphere,
    SurfaceMesh,
    Torus,
    euler_characteristic,
    icosahedron,
    interval_rule,
    lagrange_shape,
    lift_to_surface,
    mesh_family,
    read_soff,
    refine,
    torus_mesh,
    triangle_rule,
    write_soff,
)


def test_icosahedron_counts_and_orientation():
    mesh = icosahedron()
    assert mesh.counts == (12, 30, 20)
    assert euler_characteristic(mesh) == 2
    corners = mesh.vertices[mesh.triangles]
    normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    assert np.all(np.einsum("ij,ij->i", normals, corners.mean(axis=1)) > 0)


def test_refinement_counts():
    sphere = Sphere()
    once = refine(icosahedron(sphere), sphere)
    assert once.counts == (42, 120, 80)
    twice = refine(once, sphere)
    assert twice.counts == (162, 480, 320)
    assert euler_characteristic(twice) == 2
    twice.check_topology()


def test_torus_mesh_is_closed_with_zero_euler_characteristic():
    mesh = torus_mesh()
    assert mesh.counts == (192, 576, 384)
    assert euler_characteristic(mesh) == 0
    mesh.check_topology()


def test_refinement_halves_mesh_size():
    family = mesh_family(Sphere(), 4)
    for coarse, fine in zip(family, family[1:]):
        assert 0.45 <= fine.h / coarse.h <= 0.6


@pytest.mark.parametrize("surface", (Sphere(), Sphere(0.5), Torus()), ids=lambda s: s.name)
def test_lifted_nodes_lie_on_surface(surface):
    for mesh in mesh_family(surface, 2, s=2):
        assert_allclose(surface.distance(mesh.vertices), 0.0, atol=1e-12)
        assert_allclose(surface.distance(mesh.edge_nodes), 0.0, atol=1e-12)
        assert mesh.geom_nodes.shape == (mesh.counts[2], 6, 3)


def test_mesh_family_skips_levels_below_min_level():
    family = mesh_family(Sphere(), 3, min_level=1)
    assert [mesh.counts for mesh in family] == [(42, 120, 80), (162, 480, 320)]


def test_lift_projects_offset_vertices():
    sphere = Sphere()
    base = icosahedron(sphere)
    inflated = SurfaceMesh(vertices=1.05 * base.vertices, triangles=base.triangles)
    lifted = lift_to_surface(inflated, sphere, 1)
    assert_allclose(lifted.vertices, base.vertices, atol=1e-14)


def test_lift_rejects_far_vertices():
    base = torus_mesh()
    far = SurfaceMesh(vertices=2.0 * base.vertices, triangles=base.triangles)
    with pytest.raises(NeighborhoodError):
        lift_to_surface(far, Torus(), 1)
    with pytest.raises(ValidationError):
        lift_to_surface(icosahedron(), Sphere(), 3)


def test_lift_accepts_any_outward_sphere_offset():
    base = icosahedron()
    inflated = SurfaceMesh(vertices=2.5 * base.vertices, triangles=base.triangles)
    assert_allclose(lift_to_surface(inflated, Sphere(), 1).vertices, base.vertices, atol=1e-14)


def test_check_topology_detects_flipped_and_open_meshes():
    base = icosahedron()
    flipped = base.triangles.copy()
    flipped[0] = flipped[0, [0, 2, 1]]
    with pytest.raises(ValidationError, match="orientation"):
        SurfaceMesh(vertices=base.vertices, triangles=flipped).check_topology()
    opened = SurfaceMesh(vertices=base.vertices, triangles=base.triangles[1:])
    with pytest.raises(ValidationError, match="closed"):
        opened.check_topology()
    opened.check_topology(closed=False)


def test_mesh_rejects_bad_arrays():
    with pytest.raises(ValidationError):
        SurfaceMesh(vertices=np.zeros((3, 2)), triangles=np.array([[0, 1, 2]]))
    with pytest.raises(ValidationError):
        SurfaceMesh(vertices=np.zeros((3, 3)), triangles=np.array([[0, 1, 3]]))
    with pytest.raises(ValidationError):
        SurfaceMesh(vertices=np.zeros((3, 3)), triangles=np.array([[0, 1, 2]]), order=2)


def test_edge_signs_follow_global_orientation():
    mesh = icosahedron()
    for t, tri in enumerate(mesh.triangles):
        for local, (i, j) in enumerate(((0, 1), (1, 2), (2, 0))):
            edge = mesh.edges[mesh.triangle_edges[t, local]]
            assert sorted(edge) == sorted((tri[i], tri[j]))
            assert mesh.triangle_edge_signs[t, local] == (1 if tri[i] < tri[j] else -1)


@pytest.mark.parametrize("order", (1, 2))
def test_soff_round_trip(tmp_path, order):
    sphere = Sphere()
    mesh = lift_to_surface(icosahedron(sphere), sphere, order)
    path = tmp_path / "mesh.soff"
    write_soff(mesh, path)
    loaded = read_soff(path)
    assert loaded.order == order
    assert_allclose(loaded.vertices, mesh.vertices, rtol=0, atol=0)
    assert (loaded.triangles == mesh.triangles).all()
    if order == 2:
        assert_allclose(loaded.edge_nodes, mesh.edge_nodes, rtol=0, atol=0)


def test_soff_rejects_malformed_files(tmp_path):
    path = tmp_path / "broken.soff"
    path.write_text("OFF\n3 1\n")
    with pytest.raises(ValidationError, match="header"):
        read_soff(path)
    path.write_text("SOFF 1\n3 1\n0 0 0\n1 0 0\n")
    with pytest.raises(ValidationError, match="truncated"):
        read_soff(path)
    path.write_text("SOFF 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n1 1 0\n4 0 1 2 3\n")
    with pytest.raises(ValidationError, match="triangular"):
        read_soff(path)
    path.write_text("SOFF 2\n3 1\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\nedge-node 0 1 0.5 0 0\n")
    with pytest.raises(ValidationError, match="missing edge nodes"):
        read_soff(path)


def test_triangle_rule_is_exact():
    for degree in range(9):
        rule = triangle_rule(degree)
        assert rule.weights.sum() == pytest.approx(0.5, abs=1e-14)
        xi, eta = rule.points.T
        for a in range(degree + 1):
            for b in range(degree + 1 - a):
                exact = factorial(a) * factorial(b) / factorial(a + b + 2)
                assert rule.weights @ (xi**a * eta**b) == pytest.approx(exact, abs=1e-14)


def test_interval_rule_is_exact():
    points, weights = interval_rule(5)
    for p in range(6):
        assert weights @ points**p == pytest.approx(1 / (p + 1), abs=1e-14)


def test_triangle_rule_rejects_negative_degree():
    with pytest.raises(ValidationError):
        triangle_rule(-1)


def test_quadratic_shapes_are_nodal():
    nodes = np.array([[0, 0], [1, 0], [0, 1], [0.5, 0], [0.5, 0.5], [0, 0.5]])
    values, grads = lagrange_shape(2, nodes)
    assert_allclose(values, np.eye(6), atol=1e-14)
    assert_allclose(grads.sum(axis=1), 0.0, atol=1e-13)
    with pytest.raises(ValidationError):
        lagrange_shape(3, nodes)
