"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``.

Loop order and operation order match the compiled code line for line, so
both backends produce bit-identical floats. Work is done on nested lists;
numpy scalar indexing would be far slower.
"""
import numpy as np

BACKEND = "python"

_MASK = (1 << 64) - 1


def _mix(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def splitmix64_doubles(state, count):
    s = state & _MASK
    out = []
    for _ in range(count):
        s = (s + 0x9E3779B97F4A7C15) & _MASK
        out.append(float(_mix(s) >> 11) * (1.0 / 9007199254740992.0))
    return s, np.array(out, dtype=np.float64)


def _reflect_left(m, v):
    n = len(m)
    vv = 0.0
    for i in range(n):
        vv = vv + v[i] * v[i]
    beta = 2.0 / vv
    for j in range(len(m[0]) if n else 0):
        s = 0.0
        for i in range(n):
            s = s + v[i] * m[i][j]
        s = s * beta
        for i in range(n):
            m[i][j] = m[i][j] - s * v[i]


def _reflect_right(m, v):
    n = len(v)
    vv = 0.0
    for j in range(n):
        vv = vv + v[j] * v[j]
    beta = 2.0 / vv
    for row in m:
        s = 0.0
        for j in range(n):
            s = s + row[j] * v[j]
        s = s * beta
        for j in range(n):
            row[j] = row[j] - s * v[j]


def _lists(vectors):
    return [np.asarray(v, dtype=np.float64).tolist() for v in vectors]


def reflect_left(m, v):
    out = np.asarray(m, dtype=np.float64).tolist()
    _reflect_left(out, np.asarray(v, dtype=np.float64).tolist())
    return np.array(out, dtype=np.float64)


def reflect_right(m, v):
    out = np.asarray(m, dtype=np.float64).tolist()
    _reflect_right(out, np.asarray(v, dtype=np.float64).tolist())
    return np.array(out, dtype=np.float64)


def form_transform(diag, outer, inner):
    """Return ``Q1 @ diag(d) @ Q2`` with ``Qk`` products of reflectors."""
    d = np.asarray(diag, dtype=np.float64).tolist()
    n = len(d)
    m = [[0.0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = d[i]
    for v in reversed(_lists(outer)):
        _reflect_left(m, v)
    for v in _lists(inner):
        _reflect_right(m, v)
    return np.array(m, dtype=np.float64).reshape(n, n)


def conjugate(mat, diag, outer, inner):
    """Return ``S @ mat @ inv(S)`` for ``S = Q1 @ diag(d) @ Q2``."""
    m = np.asarray(mat, dtype=np.float64).tolist()
    d = np.asarray(diag, dtype=np.float64).tolist()
    n = len(m)
    inner_l = _lists(inner)
    outer_l = _lists(outer)
    for v in reversed(inner_l):
        _reflect_left(m, v)
    for v in reversed(inner_l):
        _reflect_right(m, v)
    for i in range(n):
        row = m[i]
        for j in range(n):
            row[j] = (row[j] * d[i]) / d[j]
    for v in reversed(outer_l):
        _reflect_left(m, v)
    for v in reversed(outer_l):
        _reflect_right(m, v)
    return np.array(m, dtype=np.float64).reshape(n, n)
