"""Dense real linear algebra with an explicit tolerance policy.

All rank decisions go through the singular value decomposition and compare
singular values against ``rank_rel * max(rows, cols) * sigma_max``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from cspair.errors import InvalidMatrix, SingularMatrix


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative tolerances used throughout the package.

    Parameters
    ----------
    rank_rel
        Singular values below ``rank_rel * max(rows, cols) * sigma_max`` are
        treated as zero.
    root_rel
        Relative radius for deciding that two roots coincide (reciprocal
        pairing, self-duality, isomorphism matching).
    residual_rel
        Relative residual bound used for validation and verification.
    cluster_rel
        Relative radius for grouping computed eigenvalues into one factor.
        Eigenvalues of a defective block of size n scatter like
        ``eps ** (1 / n)``, so this has to be much looser than ``root_rel``.
    """

    rank_rel: float = 1e-9
    root_rel: float = 1e-6
    residual_rel: float = 1e-8
    cluster_rel: float = 1e-2

    def __post_init__(self):
        for name in ("rank_rel", "root_rel", "residual_rel", "cluster_rel"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")

    def rank_threshold(self, shape, sigma_max):
        return self.rank_rel * max(shape) * sigma_max


DEFAULT_TOL = TolerancePolicy()


def as_matrix(m, name="matrix"):
    """Convert to a finite 2-D float64 array or raise :class:`InvalidMatrix`."""
    try:
        arr = np.array(m, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"{name} is not a numeric matrix: {exc}") from None
    if arr.ndim != 2:
        raise InvalidMatrix(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return arr


def norm2(m):
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def rank(m, tol=DEFAULT_TOL):
    m = as_matrix(m)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol.rank_threshold(m.shape, s[0])))


def nullspace(m, tol=DEFAULT_TOL, scale=None):
    """Return ``(rank, basis)`` where ``basis`` has orthonormal columns spanning ker m.

    ``scale`` replaces ``sigma_max`` in the rank threshold; pass it when ``m``
    is derived from a larger matrix and may itself be numerically zero.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0 or not np.any(m):
        return 0, np.eye(cols)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    ref = s[0] if scale is None else max(scale, s[0])
    r = int(np.sum(s > tol.rank_threshold(m.shape, ref)))
    return r, vt[r:].T.copy()


def orth(m, tol=DEFAULT_TOL):
    """Orthonormal basis of the column space of ``m``."""
    m = as_matrix(m)
    if m.size == 0 or not np.any(m):
        return np.zeros((m.shape[0], 0))
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > tol.rank_threshold(m.shape, s[0])))
    return u[:, :r]


def cond(m):
    s = np.linalg.svd(as_matrix(m), compute_uv=False)
    if s.size == 0:
        return 1.0
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def inverse(m, tol=DEFAULT_TOL):
    """Inverse of a square matrix; raises :class:`SingularMatrix` when rank-deficient."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise InvalidMatrix(f"inverse needs a square matrix, got {m.shape}")
    s = np.linalg.svd(m, compute_uv=False)
    if s.size and (s[0] == 0.0 or s[-1] <= tol.rank_threshold(m.shape, s[0])):
        raise SingularMatrix(
            f"matrix is numerically singular (sigma_min/sigma_max = "
            f"{(s[-1] / s[0]) if s[0] else 0.0:.3e})"
        )
    return sla.solve(m, np.eye(m.shape[0]))


def least_norm_solve(m, y, tol=DEFAULT_TOL):
    """Minimum-norm least-squares solution of ``m @ x = y``.

    Returns ``(x, residual)`` with ``residual = |m @ x - y|``.
    """
    m = as_matrix(m)
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != m.shape[0]:
        raise InvalidMatrix(f"right-hand side has length {y.shape[0]}, expected {m.shape[0]}")
    if m.size == 0:
        return np.zeros((m.shape[1],) + y.shape[1:]), float(np.linalg.norm(y))
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > tol.rank_threshold(m.shape, s[0])))
    coef = (u[:, :r].T @ y) / (s[:r] if y.ndim == 1 else s[:r, None])
    x = vt[:r].T @ coef
    return x, float(np.linalg.norm(m @ x - y))


def complement_in(big, small, tol=DEFAULT_TOL):
    """Orthonormal basis of ``span(big)`` orthogonal to ``span(small)``.

    ``small`` must have orthonormal columns.
    """
    if small.shape[1] == 0:
        return orth(big, tol)
    resid = big - small @ (small.T @ big)
    expected = big.shape[1] - small.shape[1]
    u, s, _ = np.linalg.svd(resid, full_matrices=False)
    return u[:, :expected]


def block_diag(*blocks):
    if not blocks:
        return np.zeros((0, 0))
    return sla.block_diag(*blocks)
