import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from dlreduce import kernels

needs_numba = pytest.mark.skipif(kernels.numba_impl is None, reason="numba not installed")

shapes = st.tuples(st.integers(1, 6), st.integers(1, 5))


@st.composite
def relations(draw):
    b, m = draw(shapes)
    rel = draw(hnp.arrays(np.bool_, (b, m, m)))
    target = draw(hnp.arrays(np.bool_, (b, m)))
    return rel, target


@needs_numba
@settings(max_examples=100, deadline=None)
@given(relations(), st.integers(0, 6))
def test_count_at_least_backends_agree(rt, n):
    rel, target = rt
    want = kernels.numpy_impl.count_at_least(rel, target, n)
    assert np.array_equal(kernels.numba_impl.count_at_least(rel, target, n), want)


@needs_numba
@settings(max_examples=100, deadline=None)
@given(relations(), st.integers(0, 6), st.sampled_from([1, 2]), st.booleans())
def test_quantify_backends_agree(rt, n, axis, at_least):
    body, _ = rt
    want = kernels.numpy_impl.quantify(body, axis, n, at_least)
    assert np.array_equal(kernels.numba_impl.quantify(body, axis, n, at_least), want)


@needs_numba
@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2**20 - 1), min_size=1, max_size=20), st.integers(1, 20))
def test_decode_bits_backends_agree(codes, nbits):
    codes = np.array(codes, dtype=np.int64)
    want = kernels.numpy_impl.decode_bits(codes, nbits)
    assert np.array_equal(kernels.numba_impl.decode_bits(codes, nbits), want)


def test_count_at_least_example():
    rel = np.array([[[0, 1, 1], [0, 0, 0], [1, 1, 0]]], dtype=bool)
    target = np.array([[0, 1, 1]], dtype=bool)
    assert kernels.count_at_least(rel, target, 2).tolist() == [[True, False, False]]


def test_quantify_axes():
    body = np.array([[[1, 1], [0, 0]]], dtype=bool)
    assert kernels.quantify(body, 2, 1, True).tolist() == [[True, False]]
    assert kernels.quantify(body, 1, 1, True).tolist() == [[True, True]]
    assert kernels.quantify(body, 2, 0, False).tolist() == [[False, True]]
    with pytest.raises(ValueError):
        kernels.quantify(body, 0, 1, True)


def test_decode_bits_msb_first():
    assert kernels.decode_bits(np.array([5]), 4).tolist() == [[False, True, False, True]]


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("0", "numba")])
def test_backend_flag(flag, expected):
    if expected == "numba" and kernels.numba_impl is None:
        pytest.skip("numba not installed")
    env = dict(os.environ, DLREDUCE_NO_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from dlreduce import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == expected
