import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from conftest import naive_mode_product
from sompca.errors import ShapeError
from sompca.tensor_core import as_tensor, n_mode_product

T22 = np.array([[1.0, 2.0], [3.0, 4.0]])


def test_basis_vector_selects_row():
    out = n_mode_product(T22, [1.0, 0.0], 0)
    assert out.shape == (1, 2)
    assert_array_equal(out, [[1.0, 2.0]])


def test_uniform_sum_third_mode():
    out = n_mode_product(np.ones((2, 2, 2)), np.full(2, 1 / np.sqrt(2)), 2)
    assert out.shape == (2, 2, 1)
    assert_allclose(out, np.sqrt(2), rtol=1e-15)


def test_weighted_columns_match_summation():
    expected = naive_mode_product(T22, [0.6, 0.8], 1)
    assert_allclose(expected, [[2.2], [5.0]], rtol=1e-15)
    assert_allclose(n_mode_product(T22, [0.6, 0.8], 1), expected, rtol=1e-14)


def test_matches_naive_on_random_4th_order(rng):
    t = rng.standard_normal((3, 4, 2, 5))
    for n in range(4):
        u = rng.standard_normal(t.shape[n])
        assert_allclose(n_mode_product(t, u, n), naive_mode_product(t, u, n), atol=1e-12)


@pytest.mark.parametrize("u, n", [([1.0, 2.0, 3.0], 0), ([1.0], 1), ([1.0, 0.0], 2)])
def test_dimension_mismatch(u, n):
    with pytest.raises(ShapeError, match="mode"):
        n_mode_product(T22, u, n)


def test_as_tensor_validation():
    t = as_tensor([[1, 2], [3, 4]])
    assert t.dtype == np.float64 and not t.flags.writeable
    with pytest.raises(ShapeError):
        as_tensor(3.0)
    with pytest.raises(ShapeError):
        as_tensor(np.zeros((2, 0)))


shapes = st.lists(st.integers(1, 4), min_size=1, max_size=4).map(tuple)
vals = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def tensor_and_mode(draw):
    shape = draw(shapes)
    t = draw(arrays(np.float64, shape, elements=vals))
    n = draw(st.integers(0, len(shape) - 1))
    u = draw(arrays(np.float64, shape[n], elements=vals))
    v = draw(arrays(np.float64, shape[n], elements=vals))
    a, b = draw(vals), draw(vals)
    return t, n, u, v, a, b


@settings(max_examples=200, deadline=None)
@given(tensor_and_mode())
def test_shape_contract_and_linearity(case):
    t, n, u, v, a, b = case
    out = n_mode_product(t, a * u + b * v, n)
    expected_shape = list(t.shape)
    expected_shape[n] = 1
    assert out.shape == tuple(expected_shape)
    lhs_scale = 1e-12 * max(1.0, np.abs(t).max()) * (abs(a) * np.abs(u).sum() + abs(b) * np.abs(v).sum() + 1)
    assert_allclose(out, a * n_mode_product(t, u, n) + b * n_mode_product(t, v, n), atol=lhs_scale)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_mode_commutativity(data):
    shape = data.draw(st.lists(st.integers(1, 4), min_size=2, max_size=4).map(tuple))
    t = data.draw(arrays(np.float64, shape, elements=st.floats(-10, 10)))
    m, n = data.draw(st.lists(st.integers(0, len(shape) - 1), min_size=2, max_size=2,
                              unique=True))
    u = data.draw(arrays(np.float64, shape[m], elements=st.floats(-1, 1)))
    v = data.draw(arrays(np.float64, shape[n], elements=st.floats(-1, 1)))
    a = n_mode_product(n_mode_product(t, u, m), v, n)
    b = n_mode_product(n_mode_product(t, v, n), u, m)
    assert_allclose(a, b, atol=1e-12)
