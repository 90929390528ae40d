"""The numba kernels and the numpy fallbacks must agree."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ias.kernels import HAVE_NUMBA, numba_impl, numpy_impl

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")

finite = st.floats(-5, 5, allow_nan=False, width=64)


@settings(max_examples=40)
@given(arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(2, 12)), elements=finite),
       st.booleans())
def test_marching_segments_agree(D, periodic):
    a = numba_impl.marching_segments(D, periodic)
    b = numpy_impl.marching_segments(D, periodic)
    assert a.tolist() == b.tolist()


def test_marching_ignores_nan_cells():
    D = np.array([[1.0, -1.0, 1.0], [1.0, np.nan, 1.0], [1.0, 1.0, 1.0]])
    for impl in (numba_impl, numpy_impl):
        assert len(impl.marching_segments(D, False)) == 0


def quadric_grid(n, a, b, c, noise, seed):
    s, t = np.meshgrid(np.linspace(-1, 1, n), np.linspace(-1, 1, n), indexing="ij")
    x = s + 0.1 * np.sin(t)
    y = t + 0.1 * s * s
    u = a * x * x + b * x * y + c * y * y + np.random.default_rng(seed).normal(0, noise, x.shape)
    return x, y, u


@settings(max_examples=25)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 2 ** 16),
       st.booleans())
def test_local_hessian_det_agree(a, b, c, seed, noisy):
    x, y, u = quadric_grid(14, a, b, c, 1e-3 if noisy else 0.0, seed)
    usable = np.ones(x.shape, bool)
    sheet = np.ones(x.shape, np.int8)
    args = (x, y, u, usable, sheet, 2, 16, 1e8, False, 0.0, 2)
    d1, s1 = numba_impl.local_hessian_det(*args)
    d2, s2 = numpy_impl.local_hessian_det(*args)
    assert np.array_equal(s1, s2)
    ok = s1 == 0
    assert np.allclose(d1[ok], d2[ok], atol=1e-9, rtol=1e-9)
    if not noisy and ok.any():
        assert np.allclose(d1[ok], 4 * a * c - b * b, atol=1e-8)


@settings(max_examples=25)
@given(st.integers(1, 6), st.integers(1, 30), st.sampled_from([1, -1]), st.floats(-1, 1),
       st.integers(0, 2 ** 16), st.booleans())
def test_rk4_riccati_agree(P, N, eps, c, seed, keep):
    rng = np.random.default_rng(seed)
    fp = rng.normal(size=(2, P, 2 * N + 1))
    gp = rng.normal(size=(2, P, 2 * N + 1))
    h = rng.normal(scale=0.05, size=(2, P, N))
    r0 = rng.normal(size=(2, P))
    args = (fp[0], fp[1], gp[0], gp[1], h[0], h[1], r0[0], r0[1], c, eps, 1e6, keep)
    a = numba_impl.rk4_riccati(*args)
    b = numpy_impl.rk4_riccati(*args)
    assert np.array_equal(a[2], b[2])
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(a[1], b[1], rtol=1e-12, atol=1e-12)


def test_rk4_blowup_flagged():
    P, N = 1, 50
    one = np.ones((P, 2 * N + 1))
    zero = np.zeros((P, 2 * N + 1))
    h = np.full((P, N), 0.1)
    for impl in (numba_impl, numpy_impl):
        # R' = R^2 from R=1 blows up at z=1
        re, im, status = impl.rk4_riccati(one, zero, zero, zero, h, np.zeros((P, N)),
                                          np.ones(P), np.zeros(P), 1.0, 1, 1e6, True)
        assert status[0] == 1 and np.isnan(re[0, -1])
