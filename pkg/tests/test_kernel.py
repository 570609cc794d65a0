import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mpso_lssvm.kernel import KernelSpec, cross_kernel, gram_matrix, rbf


def loop_rbf(x, z, sigma):
    return math.exp(-sum((a - b) ** 2 for a, b in zip(x, z)) / sigma**2)


def test_rbf_self_is_one():
    assert rbf([1.0, -2.0, 3.5], [1.0, -2.0, 3.5], 0.3) == 1.0


def test_rbf_unit_exponent():
    # ||x - z||^2 = 0.36 + 0.64 = 1.0 = sigma^2
    assert rbf([0.0, 0.0], [0.6, 0.8], 1.0) == pytest.approx(math.exp(-1), abs=1e-12)


def test_rbf_half_width():
    assert rbf([0.0], [1.0], 0.5) == pytest.approx(math.exp(-4.0), rel=1e-14)
    assert rbf([0.0], [1.0], 0.5) == pytest.approx(0.018316, abs=1e-6)


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_rbf_bad_sigma(sigma):
    with pytest.raises(ValueError):
        rbf([0.0], [1.0], sigma)


def test_rbf_dimension_mismatch():
    with pytest.raises(ValueError):
        rbf([0.0], [1.0, 2.0], 1.0)


def test_kernel_spec_validates():
    with pytest.raises(ValueError):
        KernelSpec(0.0)


def test_gram_single_point():
    assert np.array_equal(gram_matrix([[3.0, 1.0]], KernelSpec(2.0)), [[1.0]])


def test_gram_matches_loop():
    x = np.array([[0.0], [0.7], [2.5]])
    k = gram_matrix(x, KernelSpec(1.0))
    oracle = np.array([[loop_rbf(a, b, 1.0) for b in x] for a in x])
    assert np.max(np.abs(k - oracle)) <= 1e-15


def test_cross_kernel_equals_gram():
    x = np.random.default_rng(1).normal(size=(6, 3))
    assert np.array_equal(cross_kernel(x, x, 0.8), gram_matrix(x, 0.8))


def test_cross_kernel_empty():
    k = cross_kernel(np.zeros((0, 2)), np.ones((5, 2)), 1.0)
    assert k.shape == (0, 5)


def test_cross_kernel_one_point():
    train = np.array([[0.0, 1.0], [2.0, -1.0]])
    k = cross_kernel([[0.5, 0.5]], train, 1.3)
    expected = [loop_rbf([0.5, 0.5], t, 1.3) for t in train]
    np.testing.assert_allclose(k[0], expected, rtol=1e-14)


def test_cross_kernel_dimension_mismatch():
    with pytest.raises(ValueError):
        cross_kernel(np.zeros((2, 3)), np.zeros((2, 2)), 1.0)


points = arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 4)),
                elements=st.floats(-5, 5, allow_nan=False))


@settings(max_examples=80, deadline=None)
@given(x=points, sigma=st.floats(0.05, 20), seed=st.integers(0, 10_000))
def test_gram_properties(x, sigma, seed):
    k = gram_matrix(x, sigma)
    assert np.array_equal(k, k.T)
    assert np.all(np.diag(k) == 1.0)
    assert np.all((k >= 0) & (k <= 1))
    c = np.random.default_rng(seed).normal(size=x.shape[0])
    assert c @ k @ c >= -1e-10 * max(1.0, c @ c)


@settings(max_examples=60, deadline=None)
@given(x=points, s1=st.floats(0.05, 10), ds=st.floats(0, 10))
def test_gram_monotone_in_sigma(x, s1, ds):
    assert np.all(gram_matrix(x, s1 + ds) >= gram_matrix(x, s1))
