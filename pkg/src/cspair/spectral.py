"""Spectral data of ``a``: irreducible real factors, reciprocal classes, filtrations.

Factors are found by clustering computed eigenvalues. A cluster's mean is a
far better estimate of a defective eigenvalue than any single member, so the
reported roots are cluster means (snapped onto the unit circle for
self-dual factors).
"""
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import polynomial as P

from cspair.errors import DecompositionFailure, UnpairedFactor, ZeroRoot
from cspair.matlin import DEFAULT_TOL, complement_in, norm2, nullspace

REAL = "real"
COMPLEX = "complex"


@dataclass(frozen=True)
class RealPoly:
    """Real polynomial, coefficients in ascending degree."""

    coeffs: tuple

    def __post_init__(self):
        c = [float(x) for x in self.coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        return P.polyval(x, self.coeffs)

    def __mul__(self, other):
        return RealPoly(tuple(P.polymul(self.coeffs, other.coeffs)))

    def __pow__(self, k):
        out = RealPoly((1.0,))
        for _ in range(k):
            out = out * self
        return out


@dataclass(frozen=True)
class IrreducibleFactor:
    """Monic irreducible real factor ``t - r`` or ``(t - c)(t - conj(c))`` with ``c = e + if``, ``f > 0``."""

    kind: str
    r: float = 0.0
    e: float = 0.0
    f: float = 0.0
    multiplicity: int = 1
    # exact root of the factor this one was derived from by reciprocal_partner
    dual_of: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in (REAL, COMPLEX):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == COMPLEX and not self.f > 0:
            raise ValueError("complex factors are stored with f > 0")

    @classmethod
    def real(cls, r, multiplicity=1):
        return cls(REAL, r=float(r), multiplicity=int(multiplicity))

    @classmethod
    def complex(cls, e, f, multiplicity=1):
        return cls(COMPLEX, e=float(e), f=abs(float(f)), multiplicity=int(multiplicity))

    @property
    def degree(self):
        return 1 if self.kind == REAL else 2

    @property
    def root(self):
        return complex(self.r, 0.0) if self.kind == REAL else complex(self.e, self.f)

    @property
    def modulus(self):
        return abs(self.r) if self.kind == REAL else float(np.hypot(self.e, self.f))

    @property
    def key(self):
        """Sort key: real factors first, then by root."""
        if self.kind == REAL:
            return (0, self.r, 0.0)
        return (1, self.e, self.f)

    @property
    def poly(self):
        if self.kind == REAL:
            return RealPoly((-self.r, 1.0))
        return RealPoly((self.e * self.e + self.f * self.f, -2.0 * self.e, 1.0))

    def evaluate(self, m):
        """``p(m)`` for a square matrix ``m``."""
        eye = np.eye(m.shape[0])
        if self.kind == REAL:
            return m - self.r * eye
        shifted = m - self.e * eye
        return shifted @ shifted + (self.f * self.f) * eye

    def distance(self, z):
        """Distance from ``z`` to the nearest root of this factor."""
        c = self.root
        return min(abs(z - c), abs(z - c.conjugate()))

    def same_root(self, other, rel):
        if self.kind != other.kind:
            return False
        return abs(self.root - other.root) <= rel * max(1.0, self.modulus)

    def with_multiplicity(self, m):
        return replace(self, multiplicity=int(m))

    def label(self):
        """Readable polynomial, e.g. ``t + 1`` or ``t^2 - 1.2t + 1``."""
        if self.kind == REAL:
            return f"t {'-' if self.r >= 0 else '+'} {abs(self.r):.6g}"
        lin = -2.0 * self.e
        text = "t^2" if lin == 0.0 else f"t^2 {'+' if lin > 0 else '-'} {abs(lin):.6g}t"
        return f"{text} + {self.e * self.e + self.f * self.f:.6g}"

    def to_dict(self):
        if self.kind == REAL:
            return {"kind": REAL, "r": self.r}
        return {"kind": COMPLEX, "e": self.e, "f": self.f}


@dataclass(frozen=True)
class ReciprocalClass:
    """A factor ``p`` with its reciprocal ``p~``; ``p`` is the representative with ``|root| >= 1``."""

    p: IrreducibleFactor
    p_tilde: IrreducibleFactor
    self_dual: bool
    total_multiplicity: int
    warning: str = None

    @property
    def dim(self):
        return self.p.degree * self.total_multiplicity


def char_poly(a):
    """Monic characteristic polynomial of ``a`` (ascending coefficients)."""
    a = np.asarray(a, dtype=np.float64)
    coeffs = np.real(np.poly(np.linalg.eigvals(a))) if a.size else np.array([1.0])
    return RealPoly(tuple(coeffs[::-1]))


def _cluster_indices(values, tol):
    """Single-linkage clusters of complex ``values`` with relative radius ``cluster_rel``."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= tol.cluster_rel * scale:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def cluster_values(values, tol=DEFAULT_TOL):
    """Group eigenvalues into clusters, returning a list of index lists."""
    return _cluster_indices(np.asarray(values, dtype=complex), tol)


def factors_from_roots(roots, tol=DEFAULT_TOL):
    """Irreducible real factors (with multiplicities) from a conjugation-closed root list."""
    roots = np.asarray(roots, dtype=complex)
    factors = []
    for idx in _cluster_indices(roots, tol):
        mean = complex(np.mean(roots[idx]))
        if abs(mean) < tol.root_rel:
            raise ZeroRoot("zero is a root; a must be invertible")
        scale = max(1.0, abs(mean))
        if abs(mean.imag) <= tol.cluster_rel * scale:
            factors.append(IrreducibleFactor.real(mean.real, len(idx)))
        elif mean.imag > 0:
            factors.append(IrreducibleFactor.complex(mean.real, mean.imag, len(idx)))
    total = sum(p.degree * p.multiplicity for p in factors)
    if total != len(roots):
        raise DecompositionFailure(
            f"root clusters are not closed under conjugation ({total} != {len(roots)}); "
            "try a different cluster_rel"
        )
    return sorted(factors, key=lambda p: p.key)


def irreducible_factors(q, tol=DEFAULT_TOL):
    """Factor a monic real polynomial into irreducible real factors."""
    coeffs = np.asarray(q.coeffs, dtype=np.float64)
    if abs(coeffs[0]) <= tol.rank_rel * np.max(np.abs(coeffs)):
        raise ZeroRoot("constant term vanishes; zero is a root")
    return factors_from_roots(np.roots(coeffs[::-1]), tol)


def reciprocal_partner(p):
    """The factor whose roots are the reciprocals of the roots of ``p``."""
    if p.dual_of is not None:
        if p.kind == REAL:
            return replace(p, r=p.dual_of[0], dual_of=(p.r, 0.0))
        return replace(p, e=p.dual_of[0], f=p.dual_of[1], dual_of=(p.e, p.f))
    if p.kind == REAL:
        if p.r == 0.0:
            raise ZeroRoot("t has no reciprocal factor")
        return replace(p, r=1.0 / p.r, dual_of=(p.r, 0.0))
    m2 = p.e * p.e + p.f * p.f
    if m2 == 0.0:
        raise ZeroRoot("zero root has no reciprocal")
    # 1/c = conj(c)/|c|^2; flipping to f > 0 gives (e, f)/|c|^2
    return replace(p, e=p.e / m2, f=p.f / m2, dual_of=(p.e, p.f))


def _snap_unit(p):
    if p.kind == REAL:
        return replace(p, r=float(np.sign(p.r)), dual_of=None)
    m = p.modulus
    return replace(p, e=p.e / m, f=p.f / m, dual_of=None)


def _average_with_partner(rep, partner):
    back = reciprocal_partner(replace(partner, dual_of=None))
    if rep.kind == REAL:
        return replace(rep, r=0.5 * (rep.r + back.r), dual_of=None)
    return replace(rep, e=0.5 * (rep.e + back.e), f=0.5 * (rep.f + back.f), dual_of=None)


def reciprocal_classes(factors, tol=DEFAULT_TOL):
    """Group factors into ``{p, p~}`` classes.

    Raises :class:`UnpairedFactor` when a factor off the unit circle has no
    partner of equal multiplicity. A factor within ``cluster_rel`` of the unit
    circle but without a partner is merged toward self-dual with a warning.
    """
    pending = list(factors)
    classes = []
    while pending:
        p = pending.pop(0)
        if abs(p.modulus - 1.0) <= tol.root_rel:
            snapped = _snap_unit(p)
            classes.append(ReciprocalClass(snapped, snapped, True, p.multiplicity))
            continue
        target = reciprocal_partner(replace(p, dual_of=None))
        match = None
        for i, q in enumerate(pending):
            if q.same_root(target, tol.root_rel):
                match = i
                break
        if match is None:
            if abs(p.modulus - 1.0) <= tol.cluster_rel:
                snapped = _snap_unit(p)
                msg = (
                    f"factor {p.label()} lies {abs(p.modulus - 1.0):.2e} off the unit "
                    "circle without a reciprocal partner; treated as self-dual"
                )
                classes.append(ReciprocalClass(snapped, snapped, True, p.multiplicity, msg))
                continue
            raise UnpairedFactor(f"factor {p.label()} has no reciprocal partner")
        q = pending.pop(match)
        if q.multiplicity != p.multiplicity:
            raise UnpairedFactor(
                f"factor {p.label()} has multiplicity {p.multiplicity} but its "
                f"reciprocal has {q.multiplicity}"
            )
        rep, other = (p, q) if p.modulus > 1.0 else (q, p)
        rep = _average_with_partner(rep, other)
        classes.append(
            ReciprocalClass(rep, reciprocal_partner(rep), False, p.multiplicity + q.multiplicity)
        )
    return sorted(classes, key=lambda c: c.p.key)


@dataclass
class Spectrum:
    """Eigen-data of ``a`` shared by all per-class computations."""

    a: np.ndarray
    factors: list
    tol: object = DEFAULT_TOL

    @classmethod
    def of(cls, a, tol=DEFAULT_TOL):
        a = np.asarray(a, dtype=np.float64)
        return cls(a, factors_from_roots(np.linalg.eigvals(a), tol), tol)

    def owner(self, z):
        return min(self.factors, key=lambda p: p.distance(z) / max(1.0, p.modulus))

    def component(self, factor):
        """Orthonormal basis of the primary component of ``factor``."""
        target = min(self.factors, key=lambda p: p.distance(factor.root) / max(1.0, p.modulus))

        def select(re, im):
            return self.owner(complex(re, im)) is target

        _, z, sdim = sla.schur(self.a, output="real", sort=select)
        expected = target.degree * target.multiplicity
        if sdim != expected:
            raise DecompositionFailure(
                f"primary component of {target.label()} has dimension {sdim}, expected {expected}"
            )
        return z[:, :sdim].copy()


@dataclass
class Quotient:
    """The level quotient ``V_k / V_{k-1}`` in orthonormal complement coordinates.

    ``J`` is the complex structure induced by ``a`` (complex factors only) and
    ``b`` the induced action of ``b`` (self-dual classes only).
    """

    level: int
    W: np.ndarray
    J: np.ndarray = None
    b: np.ndarray = None

    @property
    def dim(self):
        return self.W.shape[1]

    def ops(self):
        ops = []
        if self.J is not None:
            ops.append(self.J)
        if self.b is not None:
            ops.append(self.b)
            if self.J is not None:
                ops.append(self.J @ self.b)
        return ops

    def closure(self, vectors):
        """The vectors together with their images under every structure map."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64).T).T
        if vectors.shape[1] == 0:
            return vectors
        return np.hstack([vectors] + [op @ vectors for op in self.ops()])


@dataclass
class Filtration:
    """Nested kernels ``V_k = ker p(a)^k`` inside the primary component of ``cls.p``.

    ``component`` holds an orthonormal basis of the primary component in full
    coordinates; ``levels[k-1]`` is an orthonormal basis of ``V_k`` and
    ``complements[k-1]`` of ``V_k`` orthogonal to ``V_{k-1}``, both in
    component coordinates.
    """

    cls: ReciprocalClass
    component: np.ndarray
    a_restricted: np.ndarray
    b_restricted: np.ndarray
    levels: list
    complements: list
    residuals: dict

    @property
    def n_max(self):
        return len(self.levels)

    @property
    def level_dims(self):
        return [k.shape[1] for k in self.levels]

    @property
    def level_bases(self):
        return [self.component @ k for k in self.levels]

    @cached_property
    def p_matrix(self):
        return self.cls.p.evaluate(self.a_restricted)

    @cached_property
    def semisimple(self):
        return semisimple_part(self.a_restricted, self.cls.p)

    def quotient(self, k):
        W = self.complements[k - 1]
        p = self.cls.p
        J = None
        if p.kind == COMPLEX:
            J = W.T @ ((self.a_restricted - p.e * np.eye(len(W))) / p.f) @ W
        b = None if self.b_restricted is None else W.T @ self.b_restricted @ W
        return Quotient(k, W, J, b)


def semisimple_part(a, p, max_iter=60):
    """Semisimple part of ``a`` on a primary component of ``p`` (Newton iteration).

    Iterates ``S <- S - p(S) p'(S)^-1`` from ``S = a``; the limit is the unique
    polynomial in ``a`` that is semisimple with ``a - S`` nilpotent.
    """
    eye = np.eye(a.shape[0])
    if p.kind == REAL:
        return p.r * eye
    s = a.copy()
    scale = max(1.0, norm2(a))
    for _ in range(max_iter):
        deriv = 2.0 * (s - p.e * eye)
        step = sla.solve(deriv, p.evaluate(s))
        s = s - step
        if norm2(step) <= 1e-15 * scale * a.shape[0]:
            break
    return s


def filtration(g, cls, tol=DEFAULT_TOL, spectrum=None):
    """Compute ``V_1 < V_2 < ... < V_n`` for the representative factor of ``cls``."""
    spectrum = spectrum or Spectrum.of(g.a, tol)
    q = spectrum.component(cls.p)
    m = q.shape[1]
    a_p = q.T @ g.a @ q
    residuals = {"component_invariance": norm2(g.a @ q - q @ a_p) / max(norm2(g.a), 1.0)}
    b_p = None
    if cls.self_dual:
        b_p = q.T @ g.b @ q
        residuals["b_invariance"] = norm2(g.b @ q - q @ b_p)
    pm = cls.p.evaluate(a_p)
    # rounding in p(a) is relative to the terms that formed it, not to |p(a)|
    if cls.p.kind == REAL:
        pm_scale = norm2(a_p) + abs(cls.p.r)
    else:
        pm_scale = (norm2(a_p) + abs(cls.p.e)) ** 2 + cls.p.f ** 2
    kernel = np.zeros((m, 0))
    levels, complements = [], []
    while kernel.shape[1] < m:
        if len(levels) >= m:
            raise DecompositionFailure("filtration did not exhaust the primary component")
        reduced = pm - kernel @ (kernel.T @ pm)
        _, null = nullspace(reduced, tol, scale=pm_scale)
        if null.shape[1] <= kernel.shape[1]:
            raise DecompositionFailure(
                f"filtration stalled at dimension {kernel.shape[1]} of {m} for {cls.p.label()}"
            )
        w = complement_in(null, kernel, tol)
        kernel = np.hstack([kernel, w])
        levels.append(kernel)
        complements.append(w)
    residuals["annihilation"] = norm2(np.linalg.matrix_power(pm, len(levels))) / max(
        1.0, norm2(pm) ** len(levels)
    )
    return Filtration(cls, q, a_p, b_p, levels, complements, residuals)
