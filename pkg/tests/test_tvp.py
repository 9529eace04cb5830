import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import naive_mode_product
from sompca.errors import ShapeError
from sompca.tvp import (
    Emp,
    TvpModel,
    Variant,
    batch_partial_projections,
    batch_tvp_project,
    emp_project,
    partial_projection,
    tvp_project,
)

T22 = np.array([[1.0, 2.0], [3.0, 4.0]])
E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
H = np.full(2, 1 / np.sqrt(2))


def _model(*emps, shape=(2, 2)):
    return TvpModel(shape, emps, 0, Variant.SO_MPCA, 20)


def _sequential(t, vectors):
    for n, u in enumerate(vectors):
        t = naive_mode_product(t, u, n)
    return float(t.reshape(-1)[0])


def test_emp_project_examples():
    assert emp_project(np.ones((2, 2)), Emp((H, H))) == pytest.approx(2.0, rel=1e-15)
    assert emp_project(T22, Emp((E1, E2))) == 2.0
    vecs = ([0.6, 0.8], [0.8, 0.6])
    assert _sequential(T22, vecs) == pytest.approx(5.04, rel=1e-14)
    assert emp_project(T22, Emp(vecs)) == pytest.approx(5.04, rel=1e-14)


def test_tvp_project_examples():
    e = Emp(([0.6, 0.8], [0.8, 0.6]))
    assert_allclose(tvp_project(T22, _model(e)), [emp_project(T22, e)])
    assert_allclose(tvp_project(T22, _model(Emp((E1, E1)), Emp((E2, E2)))), [1.0, 4.0])
    assert_allclose(tvp_project(T22, _model(e, Emp((E1, E2)))), [5.04, 2.0], rtol=1e-14)


def test_partial_projection_examples():
    assert_allclose(partial_projection(T22, Emp((E1, E1)), 0), [1.0, 3.0])
    assert_allclose(partial_projection(np.ones((2, 2, 2)), Emp((H, H, H)), 1), [2.0, 2.0])
    oracle = naive_mode_product(T22, [0.6, 0.8], 0).reshape(-1)
    assert_allclose(oracle, [3.0, 4.4], rtol=1e-15)
    assert_allclose(partial_projection(T22, Emp(([0.6, 0.8], E1)), 1), oracle, rtol=1e-14)


def test_shape_errors():
    with pytest.raises(ShapeError):
        emp_project(np.ones((2, 3)), Emp((H, H)))
    with pytest.raises(ShapeError):
        tvp_project(np.ones((3, 2)), _model(Emp((H, H))))
    with pytest.raises(ShapeError):
        partial_projection(T22, Emp((H, H)), 2)
    with pytest.raises(ShapeError):
        TvpModel((2, 3), [Emp((H, H))], 0, Variant.SO_MPCA, 20)


def _unit(rng, d):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_partial_projection_factorizes_emp(shape, seed):
    rng = np.random.default_rng(seed)
    t = rng.standard_normal(shape)
    e = Emp(tuple(_unit(rng, d) for d in shape))
    y = emp_project(t, e)
    for n in range(len(shape)):
        assert abs(partial_projection(t, e, n) @ e.vectors[n] - y) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
def test_tvp_linear_in_sample(shape, seed):
    rng = np.random.default_rng(seed)
    m = TvpModel(shape, [Emp(tuple(_unit(rng, d) for d in shape)) for _ in range(3)], 0,
                 Variant.SO_MPCA, 20)
    a, b = rng.standard_normal(shape), rng.standard_normal(shape)
    assert_allclose(tvp_project(2 * a - 3 * b, m), 2 * tvp_project(a, m) - 3 * tvp_project(b, m),
                    atol=1e-10)


def test_first_order_is_matrix_vector(rng):
    U = np.array([_unit(rng, 7) for _ in range(4)])
    m = TvpModel((7,), [Emp((u,)) for u in U], 0, Variant.SO_MPCA, 20)
    x = rng.standard_normal(7)
    assert_allclose(tvp_project(x, m), U @ x, atol=1e-12)


def test_batch_matches_single(rng):
    shape = (4, 3, 5)
    m = TvpModel(shape, [Emp(tuple(_unit(rng, d) for d in shape)) for _ in range(3)], 1,
                 Variant.SO_MPCA, 20)
    X = rng.standard_normal((6,) + shape)
    B = batch_tvp_project(X, m)
    for i in range(6):
        assert_allclose(B[i], tvp_project(X[i], m), atol=1e-12)
        for n in range(3):
            assert_allclose(batch_partial_projections(X, m.emps[0].vectors, n)[i],
                            partial_projection(X[i], m.emps[0], n), atol=1e-12)


def test_pca_model_accepts_unflattened_samples(rng):
    u = _unit(rng, 6)
    m = TvpModel((6,), [Emp((u,))], None, Variant.PCA, 20, sample_shape=(2, 3))
    x = rng.standard_normal((2, 3))
    assert_allclose(tvp_project(x, m), [u @ x.reshape(-1)])
    assert_allclose(batch_tvp_project(x[None], m), [[u @ x.reshape(-1)]])
