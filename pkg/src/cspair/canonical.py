"""Canonical models of the indecomposable summands, and the inverse problem.

A summand with factor ``p`` and exponent ``n`` is represented by::

    a = [[A, 0], [0, A^-1]],   b = [[0, -I], [I, 0]]

where ``A`` is the Jordan block of ``r`` (real factors) or the real Jordan
block with diagonal blocks ``D = [[e, -f], [f, e]]`` (complex factors).
"""
import math
from dataclasses import dataclass

import numpy as np

from cspair import kernels
from cspair.errors import CondBoundUnreachable, InvalidSpec, NotQuaternionCase
from cspair.matlin import DEFAULT_TOL, block_diag, cond
from cspair.pairalg import ComplexStructurePair, validate_pair
from cspair.rng import SplitMix64
from cspair.spectral import COMPLEX, REAL, IrreducibleFactor, reciprocal_partner

MAX_DRAWS = 64
N_REFLECTORS = 4


@dataclass(frozen=True)
class SummandInvariant:
    """Label ``(p, n)`` of one indecomposable summand."""

    factor: IrreducibleFactor
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpec(f"exponent n must be >= 1, got {self.n}")
        if self.factor.multiplicity != 1 or self.factor.dual_of is not None:
            clean = IrreducibleFactor(
                self.factor.kind, self.factor.r, self.factor.e, self.factor.f, 1
            )
            object.__setattr__(self, "factor", clean)

    @property
    def kind(self):
        return self.factor.kind

    @property
    def degree(self):
        return self.factor.degree

    @property
    def dim(self):
        return 2 * self.degree * self.n

    @property
    def sort_key(self):
        return self.factor.key + (-self.n,)

    def matches(self, other, rel):
        return self.n == other.n and self.factor.same_root(other.factor, rel)

    def to_dict(self):
        return {**self.factor.to_dict(), "n": self.n}

    def __str__(self):
        return f"({self.factor.label()}, n={self.n})"


def invariant(kind, n=1, r=None, e=None, f=None):
    """Convenience constructor: ``invariant("real", 2, r=3.0)``."""
    if kind == REAL:
        return SummandInvariant(IrreducibleFactor.real(r), int(n))
    if kind == COMPLEX:
        return SummandInvariant(IrreducibleFactor.complex(e, f), int(n))
    raise InvalidSpec(f"unknown factor kind {kind!r}")


def invariant_from_dict(d):
    try:
        kind = d["kind"]
        n = int(d.get("n", 1))
        if kind == REAL:
            return invariant(REAL, n, r=float(d["r"]))
        if kind == COMPLEX:
            if float(d["f"]) == 0.0:
                raise InvalidSpec("complex factor needs f != 0")
            return invariant(COMPLEX, n, e=float(d["e"]), f=float(d["f"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed invariant {d!r}: {exc}") from None
    raise InvalidSpec(f"unknown factor kind {kind!r}")


def normalize_invariant(factor, n, tol=DEFAULT_TOL):
    """Pick the representative of ``{p, p~}`` with ``|root| > 1`` (self-dual factors unchanged)."""
    if factor.modulus == 0.0:
        raise InvalidSpec("zero root is not allowed")
    if abs(factor.modulus - 1.0) > tol.root_rel and factor.modulus < 1.0:
        factor = reciprocal_partner(factor)
    return SummandInvariant(factor, int(n))


def is_irreducible(inv):
    return inv.n == 1


@dataclass(frozen=True)
class CanonicalModel:
    invariant: SummandInvariant
    A: np.ndarray
    A_inv: np.ndarray
    a_c: np.ndarray
    b_c: np.ndarray

    @property
    def J2(self):
        return self.b_c

    @property
    def J1(self):
        # a b^-1 = -a b; with b = [[0, -I], [I, 0]] this is [[0, A], [-A^-1, 0]]
        h = self.A.shape[0]
        j1 = np.zeros_like(self.a_c)
        j1[:h, h:] = self.A
        j1[h:, :h] = -self.A_inv
        return j1


def _jordan_inverse_real(r, n):
    out = np.zeros((n, n))
    for k in range(n):
        # k-th superdiagonal of the inverse Jordan block: (-1)^k r^-(k+1)
        val = (-1.0) ** k / r ** (k + 1)
        for i in range(n - k):
            out[i, i + k] = val
    return out


def _jordan_inverse_complex(e, f, n):
    m2 = e * e + f * f
    d_inv = np.array([[e, f], [-f, e]]) / m2
    out = np.zeros((2 * n, 2 * n))
    power = d_inv.copy()
    for k in range(n):
        blk = power if k % 2 == 0 else -power
        for i in range(n - k):
            j = i + k
            out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = blk
        power = power @ d_inv
    return out


def canonical_model(inv):
    n = inv.n
    p = inv.factor
    if p.kind == REAL:
        A = p.r * np.eye(n) + np.eye(n, k=1)
        A_inv = _jordan_inverse_real(p.r, n)
    else:
        D = np.array([[p.e, -p.f], [p.f, p.e]])
        A = np.kron(np.eye(n), D) + np.eye(2 * n, k=2)
        A_inv = _jordan_inverse_complex(p.e, p.f, n)
    h = A.shape[0]
    a_c = block_diag(A, A_inv)
    b_c = np.zeros((2 * h, 2 * h))
    b_c[:h, h:] = -np.eye(h)
    b_c[h:, :h] = np.eye(h)
    return CanonicalModel(inv, A, A_inv, a_c, b_c)


def assemble_models(invariants):
    """Block-diagonal ``(a, b, J1, J2)`` of the canonical models, in the given order."""
    models = [canonical_model(inv) for inv in invariants]
    a = block_diag(*[m.a_c for m in models])
    b = block_diag(*[m.b_c for m in models])
    J1 = block_diag(*[m.J1 for m in models])
    return a, b, J1, b.copy()


def quaternion_J(model, tol=DEFAULT_TOL):
    """``J = f^-1 (a - e)`` for a unit-circle complex model with ``n = 1``.

    ``J`` squares to ``-1`` and anticommutes with ``b``.
    """
    p = model.invariant.factor
    if p.kind != COMPLEX or model.invariant.n != 1:
        raise NotQuaternionCase("needs a complex factor with n = 1")
    if abs(p.modulus - 1.0) > tol.root_rel:
        raise NotQuaternionCase(f"|c| = {p.modulus} is not 1")
    return (model.a_c - p.e * np.eye(model.a_c.shape[0])) / p.f


def sorted_invariants(invariants):
    return sorted(invariants, key=lambda inv: inv.sort_key)


def invariant_multiset_equal(first, second, rel):
    """Multiset equality of invariant lists, roots compared with relative tolerance."""
    first, second = list(first), list(second)
    if len(first) != len(second):
        return False
    unmatched = list(second)
    for inv in first:
        for i, other in enumerate(unmatched):
            if inv.matches(other, rel):
                del unmatched[i]
                break
        else:
            return False
    return True


def is_isomorphic(r1, r2, tol=DEFAULT_TOL):
    """Compare two decomposition reports (or invariant lists) up to isomorphism."""
    inv1 = getattr(r1, "invariants", r1)
    inv2 = getattr(r2, "invariants", r2)
    return invariant_multiset_equal(inv1, inv2, tol.root_rel)


@dataclass(frozen=True)
class GenerationSpec:
    invariants: tuple
    seed: int = 0
    cond_bound: float = 100.0

    def __post_init__(self):
        if not self.invariants:
            raise InvalidSpec("invariant list is empty")
        if not self.cond_bound > 1.0:
            raise InvalidSpec(f"cond_bound must exceed 1, got {self.cond_bound}")
        object.__setattr__(self, "invariants", tuple(self.invariants))


@dataclass(frozen=True)
class GeneratedPair:
    pair: ComplexStructurePair
    invariants: list
    S: np.ndarray
    cond_S: float
    draws: int


def _draw_transform(stream, d, cond_bound):
    """One candidate ``S = Q1 diag(s) Q2``.

    ``Q1`` and ``Q2`` are products of ``min(4, d)`` Householder reflectors
    with vectors uniform in [-1, 1]^d; ``s_i = exp(sigma u_i)`` with ``u_i``
    uniform in [-1, 1] and ``sigma = log(cond_bound) / 2``, so
    ``cond(S) <= cond_bound`` up to rounding.
    """
    k = min(N_REFLECTORS, d)
    outer = [stream.uniform(-1.0, 1.0, d) for _ in range(k)]
    inner = [stream.uniform(-1.0, 1.0, d) for _ in range(k)]
    sigma = 0.5 * math.log(cond_bound)
    diag = np.exp(sigma * stream.uniform(-1.0, 1.0, d))
    return diag, outer, inner


def generate(spec, tol=DEFAULT_TOL):
    """Random pair with prescribed invariants: ``Ji = S Ji_c S^-1``.

    Candidates for ``S`` are drawn from ``SplitMix64(spec.seed)`` (see
    :func:`_draw_transform`) and rejected until ``cond(S) <= cond_bound``;
    at most ``MAX_DRAWS`` candidates are tried. The conjugation runs in the
    deterministic kernels, so output is bit-identical across runs and
    backends.
    """
    invariants = [normalize_invariant(inv.factor, inv.n, tol) for inv in spec.invariants]
    _, _, J1_c, J2_c = assemble_models(invariants)
    d = J1_c.shape[0]
    stream = SplitMix64(spec.seed)
    for draw in range(1, MAX_DRAWS + 1):
        diag, outer, inner = _draw_transform(stream, d, spec.cond_bound)
        if min(float(v @ v) for v in outer + inner) < 1e-12:
            continue
        S = kernels.form_transform(diag, outer, inner)
        c = cond(S)
        if c <= spec.cond_bound:
            J1 = kernels.conjugate(J1_c, diag, outer, inner)
            J2 = kernels.conjugate(J2_c, diag, outer, inner)
            pair = validate_pair(J1, J2, tol)
            return GeneratedPair(pair, sorted_invariants(invariants), S, c, draw)
    raise CondBoundUnreachable(
        f"no transform with cond <= {spec.cond_bound} in {MAX_DRAWS} draws"
    )
