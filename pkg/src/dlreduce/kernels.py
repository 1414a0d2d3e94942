"""Batched counting kernels used by the vectorised evaluators.

Every kernel exists twice: a numba ``@njit`` loop and a pure-numpy
expression.  The numba versions are used when numba imports and the
environment variable ``DLREDUCE_NO_NUMBA`` is unset (or ``0``); the numpy
versions are always importable as ``numpy_impl.<name>`` so the two can be
benchmarked and cross-checked.

Array conventions: a batch of ``B`` structures over a domain of size ``m``
stores unary relations as ``(B, m)`` bool arrays and binary relations as
``(B, m, m)`` bool arrays indexed ``[b, source, target]``.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

__all__ = ["count_at_least", "quantify", "decode_bits", "BACKEND", "numpy_impl", "numba_impl"]


def _np_count_at_least(rel, target, n):
    counts = np.count_nonzero(rel & target[:, None, :], axis=2)
    return counts >= n


def _np_quantify(body, axis, n, at_least):
    counts = np.count_nonzero(body, axis=axis)
    return counts >= n if at_least else counts <= n


def _np_decode_bits(codes, nbits):
    shifts = np.arange(nbits - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(np.bool_)


numpy_impl = SimpleNamespace(
    count_at_least=_np_count_at_least,
    quantify=_np_quantify,
    decode_bits=_np_decode_bits,
)


def _build_numba():
    from numba import njit

    @njit(cache=True)
    def count_at_least(rel, target, n):
        B, m, _ = rel.shape
        out = np.zeros((B, m), dtype=np.bool_)
        for b in range(B):
            for a in range(m):
                k = 0
                for c in range(m):
                    if rel[b, a, c] and target[b, c]:
                        k += 1
                out[b, a] = k >= n
        return out

    @njit(cache=True)
    def quantify(body, axis, n, at_least):
        B, m, _ = body.shape
        out = np.zeros((B, m), dtype=np.bool_)
        for b in range(B):
            for i in range(m):
                k = 0
                for j in range(m):
                    if axis == 2:
                        if body[b, i, j]:
                            k += 1
                    elif body[b, j, i]:
                        k += 1
                out[b, i] = k >= n if at_least else k <= n
        return out

    @njit(cache=True)
    def decode_bits(codes, nbits):
        N = codes.shape[0]
        out = np.zeros((N, nbits), dtype=np.bool_)
        for r in range(N):
            c = codes[r]
            for i in range(nbits - 1, -1, -1):
                out[r, i] = (c & 1) == 1
                c >>= 1
        return out

    return SimpleNamespace(count_at_least=count_at_least, quantify=quantify, decode_bits=decode_bits)


def _numba_wanted() -> bool:
    return os.environ.get("DLREDUCE_NO_NUMBA", "0") in ("", "0")


numba_impl = None
try:
    numba_impl = _build_numba()
except ImportError:  # pragma: no cover - numba is optional
    numba_impl = None

_active = numba_impl if (numba_impl is not None and _numba_wanted()) else numpy_impl
BACKEND = "numba" if _active is numba_impl else "numpy"


def count_at_least(rel: np.ndarray, target: np.ndarray, n: int) -> np.ndarray:
    """``out[b, a]`` iff at least ``n`` elements ``c`` have ``rel[b, a, c]`` and ``target[b, c]``."""
    return _active.count_at_least(rel, target, n)


def quantify(body: np.ndarray, axis: int, n: int, at_least: bool) -> np.ndarray:
    """Count true entries of ``body`` along ``axis`` (1 or 2) and compare with ``n``."""
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    return _active.quantify(body, axis, n, at_least)


def decode_bits(codes: np.ndarray, nbits: int) -> np.ndarray:
    """Row ``r`` holds the ``nbits`` bits of ``codes[r]``, most significant first."""
    return _active.decode_bits(np.ascontiguousarray(codes, dtype=np.int64), nbits)
