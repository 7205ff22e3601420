import numpy as np
import pytest
from numpy.testing import assert_allclose

from feeclab.core import NeighborhoodError, ValidationError, betti_numbers, validate
from feeclab.derham import (
    FormCallback,
    Lagrange2Family,
    assemble,
    assemble_true_gram,
    canonical_interpolate,
    get_family,
    quadrature_audit,
)
from feeclab.geometry import (
    Sphere,
    SurfaceMesh,
    geometry_report,
    icosahedron,
    mesh_family,
    torus_mesh,
)

UNIT_TRIANGLE = SurfaceMesh(
    vertices=np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    triangles=np.array([[0, 1, 2]]),
)
UNIT_SQUARE = SurfaceMesh(
    vertices=np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]),
    triangles=np.array([[0, 1, 2], [0, 2, 3]]),
)


def _dense(matrix):
    return matrix.toarray()


def quadratic():
    def u(x):
        return x[:, 0] ** 2 + x[:, 0] * x[:, 1] - 3 * x[:, 1]

    def du(x):
        return np.stack([2 * x[:, 0] + x[:, 1], x[:, 0] - 3, np.zeros(len(x))], axis=1)

    return FormCallback(0, u, FormCallback(1, du), "u")


def swirl():
    def w(x):
        return np.stack([-x[:, 1] ** 2, x[:, 0] ** 2, np.zeros(len(x))], axis=1)

    def rho(x):
        return 2 * x[:, 0] + 2 * x[:, 1]

    return FormCallback(1, w, FormCallback(2, rho), "w")


def test_flat_triangle_grams():
    rep = assemble(UNIT_TRIANGLE).rep
    expected = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 24
    assert_allclose(_dense(rep.gram(0)), expected, atol=1e-15)
    assert_allclose(_dense(rep.gram(2)), [[2.0]], atol=1e-14)
    g1 = _dense(rep.gram(1))
    assert_allclose(g1, g1.T, atol=1e-15)
    assert np.linalg.eigvalsh(g1).min() > 0


@pytest.mark.parametrize("mesh", (icosahedron(), torus_mesh()), ids=("sphere", "torus"))
def test_whitney_differentials_form_a_complex(mesh):
    rep = assemble(mesh).rep
    d0, d1 = _dense(rep.diff(0)), _dense(rep.diff(1))
    assert_allclose(d1 @ d0, 0.0, atol=0)
    assert_allclose(d0, np.rint(d0), atol=0)
    assert set(np.unique(d1)) <= {-1.0, 0.0, 1.0}
    assert validate(rep).valid


def test_betti_numbers_of_sphere_and_torus():
    assert betti_numbers(assemble(icosahedron()).rep) == (1, 0, 1)
    assert betti_numbers(assemble(torus_mesh()).rep) == (1, 2, 1)


def test_lagrange2_dimensions_and_differential():
    mesh = icosahedron()
    assembled = assemble(mesh, "lagrange2")
    assert assembled.rep.dims == (42, 120)
    d0 = _dense(assembled.rep.diff(0))
    assert_allclose(d0, np.rint(d0), atol=0)
    assert_allclose(d0 @ np.ones(42), 0.0, atol=0)
    assert betti_numbers(assembled.rep)[0] == 1


def test_lagrange2_one_forms_are_broken():
    mesh = icosahedron()
    family = Lagrange2Family()
    dofs, signs = family.local_dofs(mesh, 1)
    assert family.dof_count(mesh, 1) == 6 * len(mesh.triangles)
    assert len(np.unique(dofs)) == dofs.size
    assert np.all(signs == 1)
    with pytest.raises(ValidationError, match="levels 0..1"):
        family.require_level(2)


def test_mass_matrix_integrates_mesh_area():
    mesh = icosahedron()
    area = 20 * np.sqrt(3) / 4 * mesh.h**2
    g0 = assemble(mesh).rep.gram(0)
    ones = np.ones(mesh.counts[0])
    assert ones @ (g0 @ ones) == pytest.approx(area, rel=1e-12)


def test_true_mass_matrix_integrates_surface_area():
    sphere = Sphere()
    mesh = mesh_family(sphere, 2, min_level=1)[0]
    true_gram, _ = assemble_true_gram(mesh, sphere, 0)
    ones = np.ones(mesh.counts[0])
    assert ones @ (true_gram @ ones) == pytest.approx(4 * np.pi, rel=1e-4)


def test_quadratic_geometry_area_is_closer():
    sphere = Sphere()
    errors = []
    for s in (1, 2):
        mesh = mesh_family(sphere, 2, s=s, min_level=1)[0]
        g0 = assemble(mesh, surface=sphere).rep.gram(0)
        ones = np.ones(mesh.counts[0])
        errors.append(abs(ones @ (g0 @ ones) - 4 * np.pi))
    assert errors[1] < errors[0]


def test_whitney_interpolation_commutes_on_flat_mesh():
    u, w = quadratic(), swirl()
    rep = assemble(UNIT_SQUARE).rep
    pi0 = canonical_interpolate(u, UNIT_SQUARE, 0)
    pi1 = canonical_interpolate(u.d, UNIT_SQUARE, 1)
    assert_allclose(rep.diff(0) @ pi0, pi1, atol=1e-13)
    w1 = canonical_interpolate(w, UNIT_SQUARE, 1)
    w2 = canonical_interpolate(w.d, UNIT_SQUARE, 2)
    assert_allclose(rep.diff(1) @ w1, w2, atol=1e-13)


def test_lagrange2_interpolation_commutes_on_flat_mesh():
    u = quadratic()
    rep = assemble(UNIT_SQUARE, "lagrange2").rep
    pi0 = canonical_interpolate(u, UNIT_SQUARE, 0, "lagrange2")
    pi1 = canonical_interpolate(u.d, UNIT_SQUARE, 1, "lagrange2")
    assert_allclose(rep.diff(0) @ pi0, pi1, atol=1e-12)


def test_interpolation_checks_degree_and_surface():
    with pytest.raises(ValidationError):
        canonical_interpolate(quadratic(), UNIT_TRIANGLE, 1)
    with pytest.raises(ValidationError):
        canonical_interpolate(quadratic(), UNIT_TRIANGLE, 0, exact=True)


def test_exact_geometry_gives_identity_jacobian():
    sphere = Sphere()
    mesh = icosahedron(sphere)
    assembled = assemble(mesh, surface=sphere, exact=True)
    for k in range(3):
        true_gram, op = assemble_true_gram(mesh, sphere, k, assembled=assembled)
        assert op.deviation <= 1e-10
        assert_allclose(_dense(true_gram), _dense(assembled.rep.gram(k)), atol=1e-12)


@pytest.mark.parametrize("s", (1, 2))
def test_jacobian_deviation_is_below_geometry_bound(s):
    sphere = Sphere()
    mesh = mesh_family(sphere, 2, s=s, min_level=1)[0]
    assembled = assemble(mesh, surface=sphere)
    bound = geometry_report(sphere, mesh).jacobian_bound
    for k in range(3):
        _, op = assemble_true_gram(mesh, sphere, k, assembled=assembled)
        assert 0 < op.deviation <= bound[k] + 1e-8


def test_true_gram_needs_surface():
    assembled = assemble(icosahedron())
    with pytest.raises(NeighborhoodError):
        assembled.true_gram(0)
    with pytest.raises(NeighborhoodError):
        assemble_true_gram(assembled.mesh, Sphere(), 0, assembled=assembled)


def test_assemble_validates_inputs():
    sphere = Sphere()
    mesh = mesh_family(sphere, 1, s=2)[0]
    with pytest.raises(ValidationError, match="quad_degree"):
        assemble(mesh, quad_degree=3)
    with pytest.raises(ValidationError, match="family"):
        assemble(mesh, "nedelec")
    with pytest.raises(ValidationError):
        get_family("lagrange2").require_level(2)


def test_quadrature_audit():
    sphere = Sphere()
    assert quadrature_audit(icosahedron(sphere), "whitney", 1, surface=sphere) <= 1e-12
    curved = mesh_family(sphere, 1, s=2)[0]
    assert quadrature_audit(curved, Lagrange2Family(), 0, surface=sphere) <= 1e-3


def test_dof_sidecar():
    mesh = icosahedron()
    whitney = assemble(mesh).dof_sidecar()
    assert whitney["family"] == "whitney"
    assert [list(level) for level in whitney["levels"]] == [["vertices"], ["edges"], ["triangles"]]
    assert whitney["levels"][1]["edges"] == list(range(30))
    lagrange = assemble(mesh, "lagrange2").dof_sidecar()
    assert lagrange["levels"][0]["edges"][0] == 12
    assert lagrange["levels"][1]["triangles"][:2] == [0, 6]


def test_form_callback_validation():
    with pytest.raises(ValidationError):
        FormCallback(3, lambda x: x[:, 0])
    with pytest.raises(ValidationError):
        FormCallback(0, lambda x: x[:, 0], FormCallback(2, lambda x: x[:, 0]))
    with pytest.raises(ValidationError, match="no exterior derivative"):
        _ = FormCallback(2, lambda x: x[:, 0], name="rho").d


def test_form_callback_frame_equivariance():
    rng = np.random.default_rng(60)
    w = swirl()
    points = rng.standard_normal((4, 3))
    frame = np.linalg.qr(rng.standard_normal((4, 3, 2)))[0]
    angle = 0.7
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    assert_allclose(w.evaluate(points, frame @ rotation), w.evaluate(points, frame) @ rotation)
    u = quadratic()
    assert_allclose(u.evaluate(points, frame), u.ambient(points))
    assert u.ambient(points.reshape(2, 2, 3)).shape == (2, 2)
