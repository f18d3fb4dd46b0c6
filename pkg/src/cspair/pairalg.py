"""Pairs of complex structures and the generators ``a = J1 J2``, ``b = J2``."""
from dataclasses import dataclass, field

import numpy as np

from cspair.errors import DimensionMismatch, NotAComplexStructure, OddDimension
from cspair.matlin import DEFAULT_TOL, as_matrix, inverse, norm2


@dataclass(frozen=True)
class ComplexStructurePair:
    dim: int
    J1: np.ndarray
    J2: np.ndarray
    residuals: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class GeneratorPair:
    """``a`` and ``b`` with ``b a b^-1 = a^-1`` and ``b^2 = -1``."""

    a: np.ndarray
    b: np.ndarray
    a_inv: np.ndarray
    residuals: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def b_inv(self):
        # b^2 = -1, so b^-1 = -b without a solve
        return -self.b

    @classmethod
    def from_ab(cls, a, b, tol=DEFAULT_TOL):
        a = as_matrix(a, "a")
        b = as_matrix(b, "b")
        if a.shape != b.shape or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"a {a.shape} and b {b.shape} must be equal squares")
        g = cls(a, b, inverse(a, tol))
        res_rel, res_b2 = relation_residuals(g)
        g.residuals.update(relation=res_rel, b_squared=res_b2)
        return g


def _square_residual(j):
    return norm2(j @ j + np.eye(j.shape[0]))


def validate_pair(J1, J2, tol=DEFAULT_TOL):
    """Check that ``J1`` and ``J2`` are complex structures of the same even dimension."""
    J1 = as_matrix(J1, "J1")
    J2 = as_matrix(J2, "J2")
    for name, j in (("J1", J1), ("J2", J2)):
        if j.shape[0] != j.shape[1]:
            raise DimensionMismatch(f"{name} is not square: {j.shape}")
    if J1.shape != J2.shape:
        raise DimensionMismatch(f"J1 is {J1.shape} but J2 is {J2.shape}")
    dim = J1.shape[0]
    if dim == 0:
        raise DimensionMismatch("empty matrices")
    if dim % 2:
        raise OddDimension(f"dimension {dim} is odd; no real matrix of odd size squares to -I")
    residuals = {}
    for name, j in (("J1", J1), ("J2", J2)):
        res = _square_residual(j)
        bound = tol.residual_rel * (1.0 + norm2(j) ** 2)
        if res > bound:
            raise NotAComplexStructure(name, res, bound)
        residuals[name] = res
    return ComplexStructurePair(dim, J1, J2, residuals)


def generators(pair, tol=DEFAULT_TOL):
    a = pair.J1 @ pair.J2
    # a is a product of two invertible matrices; inverse() only fails on garbage input
    a_inv = inverse(a, tol)
    g = GeneratorPair(a, pair.J2.copy(), a_inv)
    res_rel, res_b2 = relation_residuals(g)
    g.residuals.update(relation=res_rel, b_squared=res_b2)
    return g


def relation_residuals(g):
    """Return ``(|b a b^-1 - a^-1| / |a^-1|, |b^2 + I| / sqrt(dim))``."""
    d = g.a.shape[0]
    b_inv = inverse(g.b)
    res_rel = norm2(g.b @ g.a @ b_inv - g.a_inv) / norm2(g.a_inv)
    res_b2 = float(np.linalg.norm(g.b @ g.b + np.eye(d)) / np.sqrt(d))
    return res_rel, res_b2


def pair_from_generators(a, b):
    """Recover ``(J1, J2)`` from ``(a, b)``: ``J2 = b`` and ``J1 = a b^-1 = -a b``."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    return -(a @ b), b.copy()
