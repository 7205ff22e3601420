import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from feeclab.core import (
    ComplexError,
    ComplexRep,
    ValidationError,
    betti_numbers,
    direct_sum,
    dump_complex,
    graph_gram,
    harmonic_basis,
    hodge_decompose,
    load_complex,
    poincare_constant,
    random_complex,
    validate,
)
from feeclab.core.hilbert import adjoint_differential
from feeclab.core.sampling import LevelLayout, random_gram, sample_form

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


def _layouts(*triples):
    return tuple(LevelLayout(*t) for t in triples)


def test_random_complex_is_valid():
    rep = random_complex(np.random.default_rng(3))
    diagnostics = validate(rep)
    assert diagnostics.valid
    assert rep.total_dim <= 40
    assert all(d <= 1e-12 for d in diagnostics.cochain_defects)
    assert all(low > 0 for low in diagnostics.gram_min_eigenvalues)


def test_random_complex_has_integer_differentials():
    rep = random_complex(np.random.default_rng(4))
    for k in range(rep.top):
        d = np.asarray(rep.diff(k))
        assert_allclose(d, np.rint(d), atol=0)


def test_non_complex_is_rejected():
    rep = ComplexRep.from_matrices([np.eye(1)] * 3, [np.ones((1, 1)), np.ones((1, 1))])
    diagnostics = validate(rep)
    assert not diagnostics.valid
    assert any("D_1 D_0" in m for m in diagnostics.messages)
    with pytest.raises(ComplexError):
        harmonic_basis(rep, 0)


def test_indefinite_gram_is_rejected():
    rep = ComplexRep.from_matrices([np.diag([1.0, -1.0])], [])
    assert not validate(rep).valid


def test_diff_shape_mismatch_raises():
    with pytest.raises(ValidationError):
        ComplexRep.from_matrices([np.eye(2), np.eye(3)], [np.ones((2, 2))])


def test_betti_numbers_match_layout():
    rng = np.random.default_rng(5)
    layouts = _layouts((0, 2, 1), (1, 1, 2), (2, 3, 0))
    form = sample_form(rng, layouts=layouts)
    rep = form.complex([random_gram(rng, layout.dim) for layout in layouts])
    assert betti_numbers(rep) == (2, 1, 3)


def test_harmonic_basis_is_orthonormal_cocycle_basis():
    rep = random_complex(np.random.default_rng(6))
    for k in range(rep.top + 1):
        q = harmonic_basis(rep, k)
        gram = np.asarray(rep.gram(k))
        assert_allclose(q.T @ gram @ q, np.eye(q.shape[1]), atol=1e-9)
        assert_allclose(np.asarray(rep.diff(k)) @ q, 0.0, atol=1e-9)
        if k > 0:
            coboundary = np.asarray(rep.diff(k - 1)).T @ gram @ q
            assert_allclose(coboundary, 0.0, atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=SEEDS)
def test_hodge_decomposition_partitions_and_is_orthogonal(seed):
    rng = np.random.default_rng(seed)
    rep = random_complex(rng)
    for k in range(rep.top + 1):
        w = rng.standard_normal(rep.dim(k))
        split = hodge_decompose(rep, k, w)
        gram = np.asarray(rep.gram(k))
        scale = max(float(w @ gram @ w), 1.0)
        assert_allclose(split.total(), w, atol=1e-10 * max(1.0, np.abs(w).max()))
        parts = (split.boundary, split.harmonic, split.coexact)
        for i in range(3):
            for j in range(i + 1, 3):
                assert abs(parts[i] @ gram @ parts[j]) <= 1e-10 * scale


def test_hodge_components_lie_in_their_spaces():
    rng = np.random.default_rng(7)
    rep = random_complex(rng)
    k = 1
    split = hodge_decompose(rep, k, rng.standard_normal(rep.dim(k)))
    d_prev = np.asarray(rep.diff(k - 1))
    coefficients = np.linalg.lstsq(d_prev, split.boundary, rcond=None)[0]
    assert_allclose(d_prev @ coefficients, split.boundary, atol=1e-9)
    if k < rep.top:
        adjoint = adjoint_differential(rep, k + 1)
        coefficients = np.linalg.lstsq(adjoint, split.coexact, rcond=None)[0]
        assert_allclose(adjoint @ coefficients, split.coexact, atol=1e-9)


def test_hodge_decompose_rejects_wrong_length():
    rep = random_complex(np.random.default_rng(8))
    with pytest.raises(ComplexError):
        hodge_decompose(rep, 0, np.zeros(rep.dim(0) + 1))


def test_hodge_decompose_rejects_bad_level():
    rep = random_complex(np.random.default_rng(8))
    with pytest.raises(ComplexError):
        hodge_decompose(rep, rep.top + 1, np.zeros(1))


@settings(max_examples=25, deadline=None)
@given(seed=SEEDS)
def test_poincare_inequality_holds_on_coexact_vectors(seed):
    rng = np.random.default_rng(seed)
    rep = random_complex(rng)
    for k in range(rep.top):
        result = poincare_constant(rep, k)
        if result.degenerate:
            continue
        coexact = hodge_decompose(rep, k, rng.standard_normal(rep.dim(k))).coexact
        lhs = np.sqrt(coexact @ np.asarray(graph_gram(rep, k)) @ coexact)
        dc = np.asarray(rep.diff(k)) @ coexact
        rhs = result.constant * np.sqrt(dc @ np.asarray(rep.gram(k + 1)) @ dc)
        assert lhs <= rhs * (1 + 1e-8) + 1e-10


def test_poincare_constant_is_attained():
    rep = random_complex(np.random.default_rng(9))
    result = poincare_constant(rep, 0)
    if result.degenerate:
        pytest.skip("trivial complement of the kernel")
    v = result.achiever
    dv = np.asarray(rep.diff(0)) @ v
    ratio = np.sqrt(v @ np.asarray(graph_gram(rep, 0)) @ v) / np.sqrt(
        dv @ np.asarray(rep.gram(1)) @ dv
    )
    assert ratio == pytest.approx(result.constant, rel=1e-8)


def test_poincare_constant_degenerate_at_top():
    rep = random_complex(np.random.default_rng(10))
    result = poincare_constant(rep, rep.top)
    assert result.degenerate
    assert result.constant == 0.0


def test_direct_sum_adds_betti_numbers():
    rng = np.random.default_rng(11)
    first, second = random_complex(rng), random_complex(rng)
    total = direct_sum(first, second)
    assert total.dims == tuple(a + b for a, b in zip(first.dims, second.dims))
    expected = tuple(a + b for a, b in zip(betti_numbers(first), betti_numbers(second)))
    assert betti_numbers(total) == expected


def test_direct_sum_needs_equal_levels():
    rng = np.random.default_rng(12)
    with pytest.raises(ComplexError):
        direct_sum(random_complex(rng, levels=3), random_complex(rng, levels=2))


def test_complex_json_round_trip(tmp_path):
    rep = random_complex(np.random.default_rng(13))
    path = tmp_path / "complex.json"
    dump_complex(rep, path)
    document = json.loads(path.read_text())
    assert [level["dim"] for level in document["levels"]] == list(rep.dims)
    loaded = load_complex(path)
    assert loaded.dims == rep.dims
    for k in range(rep.top + 1):
        assert_allclose(loaded.gram(k), rep.gram(k))


def test_load_complex_rejects_malformed_documents(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ValidationError):
        load_complex(path)
    path.write_text(json.dumps({"levels": [{"gram": [[1.0]]}]}))
    with pytest.raises(ValidationError):
        load_complex(path)
