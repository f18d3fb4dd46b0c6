# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled deterministic kernels.

Every routine performs exactly the same IEEE-754 operations in exactly the
same order as its twin in ``_kernels_py``; the build disables FP contraction
so no fused multiply-add can change a rounding.
"""
from libc.stdint cimport uint64_t

import numpy as np

BACKEND = "compiled"


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


def splitmix64_doubles(state, Py_ssize_t count):
    cdef uint64_t s = <uint64_t>state
    cdef Py_ssize_t i
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(count):
        s = s + <uint64_t>0x9E3779B97F4A7C15ULL
        o[i] = <double>(_mix(s) >> 11) * (1.0 / 9007199254740992.0)
    return int(s), out


cdef void _reflect_left(double[:, ::1] m, double[::1] v) nogil:
    cdef Py_ssize_t n = m.shape[0], c = m.shape[1], i, j
    cdef double vv = 0.0, beta, s
    for i in range(n):
        vv = vv + v[i] * v[i]
    beta = 2.0 / vv
    for j in range(c):
        s = 0.0
        for i in range(n):
            s = s + v[i] * m[i, j]
        s = s * beta
        for i in range(n):
            m[i, j] = m[i, j] - s * v[i]


cdef void _reflect_right(double[:, ::1] m, double[::1] v) nogil:
    cdef Py_ssize_t r = m.shape[0], n = m.shape[1], i, j
    cdef double vv = 0.0, beta, s
    for j in range(n):
        vv = vv + v[j] * v[j]
    beta = 2.0 / vv
    for i in range(r):
        s = 0.0
        for j in range(n):
            s = s + m[i, j] * v[j]
        s = s * beta
        for j in range(n):
            m[i, j] = m[i, j] - s * v[j]


def reflect_left(m, v):
    out = np.array(m, dtype=np.float64, order="C", copy=True)
    _reflect_left(out, np.ascontiguousarray(v, dtype=np.float64))
    return out


def reflect_right(m, v):
    out = np.array(m, dtype=np.float64, order="C", copy=True)
    _reflect_right(out, np.ascontiguousarray(v, dtype=np.float64))
    return out


def form_transform(diag, outer, inner):
    """Return ``Q1 @ diag(d) @ Q2`` with ``Qk`` products of reflectors."""
    cdef double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0], i
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] m = out
    for i in range(n):
        m[i, i] = d[i]
    for v in reversed(outer):
        _reflect_left(m, np.ascontiguousarray(v, dtype=np.float64))
    for v in inner:
        _reflect_right(m, np.ascontiguousarray(v, dtype=np.float64))
    return out


def conjugate(mat, diag, outer, inner):
    """Return ``S @ mat @ inv(S)`` for ``S = Q1 @ diag(d) @ Q2``."""
    out = np.array(mat, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] m = out
    cdef double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef Py_ssize_t n = m.shape[0], i, j
    inner_c = [np.ascontiguousarray(v, dtype=np.float64) for v in inner]
    outer_c = [np.ascontiguousarray(v, dtype=np.float64) for v in outer]
    for v in reversed(inner_c):
        _reflect_left(m, v)
    for v in reversed(inner_c):
        _reflect_right(m, v)
    for i in range(n):
        for j in range(n):
            m[i, j] = (m[i, j] * d[i]) / d[j]
    for v in reversed(outer_c):
        _reflect_left(m, v)
    for v in reversed(outer_c):
        _reflect_right(m, v)
    return out
