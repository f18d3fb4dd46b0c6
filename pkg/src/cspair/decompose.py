"""Constructive splitting of a representation into indecomposable summands.

Each reciprocal class of the spectrum of ``a`` is handled on its own:

* ``p != p~``: any Jordan decomposition of ``a`` on ``V_p`` works, and ``b``
  carries it onto ``V_p~`` (:func:`split_distinct`);
* ``p = p~``: generators are chosen top-down through the kernel filtration
  so that every level quotient gets a basis made of ``{v, b v}`` pairs
  (:func:`split_selfdual_real`, :func:`split_selfdual_complex`).

Every summand basis is ordered so that ``a`` and ``b`` take exactly the
canonical block form of :func:`cspair.canonical.canonical_model`.
"""
import warnings
from dataclasses import dataclass, field
from functools import partial
from itertools import groupby

import numpy as np

from cspair.canonical import SummandInvariant, canonical_model, sorted_invariants
from cspair.errors import DecompositionFailure, IllConditionedBasis, SingularMatrix
from cspair.matlin import DEFAULT_TOL, block_diag, cond, inverse, least_norm_solve, norm2, orth
from cspair.pairalg import relation_residuals
from cspair.spectral import COMPLEX, REAL, Quotient, Spectrum, filtration, reciprocal_classes

COND_LIMIT = 1e8

__all__ = [
    "Summand",
    "SummandInvariant",
    "DecompositionReport",
    "decompose",
    "split_distinct",
    "split_selfdual_real",
    "split_selfdual_complex",
    "select_generators",
    "extend_b_pairs",
    "extend_field_basis",
]


@dataclass
class Summand:
    invariant: SummandInvariant
    generator_w: np.ndarray
    basis: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[1]


@dataclass
class DecompositionReport:
    summands: list
    invariants: list
    S: np.ndarray
    canonical_a: np.ndarray
    canonical_b: np.ndarray
    residuals: dict
    warnings: list = field(default_factory=list)
    classes: list = field(default_factory=list)

    @property
    def dim(self):
        return self.S.shape[0]

    @property
    def block_dims(self):
        return [inv.dim for inv in self.invariants]

    def grouped_invariants(self):
        """``[(invariant, count), ...]`` collapsing consecutive equal invariants."""
        return [(inv, len(list(grp))) for inv, grp in groupby(self.invariants)]


def _greedy_extend(dim, existing, ops, tol):
    """Extend ``existing`` (columns) to a basis of R^dim by closures ``[v, op v, ...]``.

    Candidates are the coordinate vectors in index order, orthogonalised
    against the current span; the candidate whose closure is best
    conditioned is taken, ties going to the lowest index.
    """
    span = orth(existing, tol) if existing.shape[1] else np.zeros((dim, 0))
    if span.shape[1] != existing.shape[1]:
        raise DecompositionFailure("existing quotient vectors are not independent")
    chosen = []
    block_size = 1 + len(ops)
    while span.shape[1] < dim:
        if span.shape[1] + block_size > dim:
            raise DecompositionFailure(
                f"quotient dimension {dim} is not a multiple of the closure size {block_size}"
            )
        proj = np.eye(dim) - span @ span.T
        best, best_score = None, -1.0
        for j in range(dim):
            v = proj[:, j]
            nv = np.linalg.norm(v)
            if nv <= 1e-8:
                continue
            v = v / nv
            block = np.column_stack([v] + [op @ v for op in ops])
            resid = block - span @ (span.T @ block)
            s = np.linalg.svd(resid, compute_uv=False)
            score = s[-1] / max(s[0], 1e-300)
            if score > best_score + 1e-12:
                best, best_score = v, score
        if best is None or best_score <= tol.rank_rel * dim:
            raise DecompositionFailure(
                f"no independent closure found (score {best_score:.3e}); tolerance breakdown"
            )
        chosen.append(best)
        block = np.column_stack([best] + [op @ best for op in ops])
        span = np.linalg.qr(np.hstack([span, block]))[0]
    return np.column_stack(chosen) if chosen else np.zeros((dim, 0))


def extend_b_pairs(quotient, existing, scalar_mode=REAL, tol=DEFAULT_TOL):
    """Complete a ``b``-closed independent set to a basis made of ``{v, b v}`` pairs.

    In ``"complex"`` mode the scalars are ``R[t]/(p) = C`` acting through the
    induced complex structure ``J``; ``b`` is then conjugate-linear and each
    new ``v`` contributes ``v, Jv, bv, Jbv``. Returns the new ``v`` as columns.
    """
    if quotient.b is None:
        raise DecompositionFailure("quotient carries no action of b")
    if scalar_mode == COMPLEX:
        if quotient.J is None:
            raise DecompositionFailure("complex mode needs the induced complex structure")
        ops = [quotient.J, quotient.b, quotient.J @ quotient.b]
    else:
        ops = [quotient.b]
    return _greedy_extend(quotient.dim, np.asarray(existing).reshape(quotient.dim, -1), ops, tol)


def extend_field_basis(quotient, existing, tol=DEFAULT_TOL):
    """Complete to a basis over ``R[t]/(p)`` (``R`` or ``C``), ignoring ``b``."""
    ops = [quotient.J] if quotient.J is not None else []
    return _greedy_extend(quotient.dim, np.asarray(existing).reshape(quotient.dim, -1), ops, tol)


def select_generators(filt, builder, tol=DEFAULT_TOL):
    """Choose cyclic generators top-down through the filtration.

    At level ``k`` the images of ``p^(i-k) w`` for every generator ``w`` of
    height ``i > k`` (closed under the quotient's structure maps) must be
    independent in ``V_k / V_{k-1}``; ``builder(quotient, existing)`` then
    completes them and each new quotient vector is lifted to ``V_k``.

    Returns ``[(k, w), ...]`` with ``w`` in component coordinates, highest
    level first.
    """
    pm = filt.p_matrix
    gens = []
    for k in range(filt.n_max, 0, -1):
        q = filt.quotient(k)
        if gens:
            pushed = []
            for i, w in gens:
                x = w
                for _ in range(i - k):
                    x = pm @ x
                pushed.append(x)
            existing = q.closure(q.W.T @ np.column_stack(pushed))
            if existing.shape[1] > q.dim or np.linalg.matrix_rank(
                existing, tol=tol.rank_rel * q.dim * max(norm2(existing), 1.0)
            ) != existing.shape[1]:
                raise DecompositionFailure(
                    f"images of higher generators are dependent at level {k}"
                )
        else:
            existing = np.zeros((q.dim, 0))
        new = builder(q, existing)
        for j in range(new.shape[1]):
            w, _ = least_norm_solve(q.W.T, new[:, j], tol)
            gens.append((k, w))
    return gens


def _summand(g, filt, n, w, factor):
    """Summand basis for generator ``w`` of height ``n``: ``a``-side chain then ``b`` times it."""
    a_p = filt.a_restricted
    if factor.kind == REAL:
        nil = a_p - factor.r * np.eye(a_p.shape[0])
        chain = [w]
        for _ in range(n - 1):
            chain.append(nil @ chain[-1])
        cols = chain[::-1]  # e_i = N^(n-i) w
    else:
        s = filt.semisimple
        j_s = (s - factor.e * np.eye(a_p.shape[0])) / factor.f
        nil = a_p - s
        x, y = [w], [j_s @ w]
        for _ in range(n - 1):
            x.append(nil @ x[-1])
            y.append(nil @ y[-1])
        cols = []
        for xi, yi in zip(x[::-1], y[::-1]):
            cols.extend([xi, yi])
    first = filt.component @ np.column_stack(cols)
    basis = np.hstack([first, g.b @ first])
    return Summand(SummandInvariant(factor, n), filt.component @ w, basis)


def _split(g, cls, tol, filt, builder):
    filt = filt or filtration(g, cls, tol)
    gens = select_generators(filt, builder, tol)
    return [_summand(g, filt, k, w, cls.p) for k, w in gens]


def split_distinct(g, cls, tol=DEFAULT_TOL, filt=None):
    """Summands of a class with ``p != p~``, from a Jordan decomposition on ``V_p``."""
    if cls.self_dual:
        raise DecompositionFailure("split_distinct needs a class with p != p~")
    return _split(g, cls, tol, filt, partial(extend_field_basis, tol=tol))


def split_selfdual_real(g, cls, tol=DEFAULT_TOL, filt=None):
    """Summands of ``V_p`` for ``p = t - r`` with ``r = +-1``."""
    if not cls.self_dual or cls.p.kind != REAL:
        raise DecompositionFailure("split_selfdual_real needs a self-dual real class")
    return _split(g, cls, tol, filt, partial(extend_b_pairs, scalar_mode=REAL, tol=tol))


def split_selfdual_complex(g, cls, tol=DEFAULT_TOL, filt=None):
    """Summands of ``V_p`` for ``p = (t - c)(t - conj c)`` with ``|c| = 1``."""
    if not cls.self_dual or cls.p.kind != COMPLEX:
        raise DecompositionFailure("split_selfdual_complex needs a self-dual complex class")
    return _split(g, cls, tol, filt, partial(extend_b_pairs, scalar_mode=COMPLEX, tol=tol))


def decompose(g, tol=DEFAULT_TOL, cond_limit=COND_LIMIT):
    """Split the representation given by generators ``g`` into indecomposable summands."""
    spectrum = Spectrum.of(g.a, tol)
    classes = reciprocal_classes(spectrum.factors, tol)
    report_warnings = [c.warning for c in classes if c.warning]
    summands = []
    for cls in classes:
        filt = filtration(g, cls, tol, spectrum)
        if not cls.self_dual:
            summands.extend(split_distinct(g, cls, tol, filt))
        elif cls.p.kind == REAL:
            summands.extend(split_selfdual_real(g, cls, tol, filt))
        else:
            summands.extend(split_selfdual_complex(g, cls, tol, filt))
    summands.sort(key=lambda s: s.invariant.sort_key)
    invariants = [s.invariant for s in summands]
    if sum(s.dim for s in summands) != g.dim:
        raise DecompositionFailure("summand dimensions do not add up to the total dimension")
    S = np.hstack([s.basis for s in summands])
    models = [canonical_model(inv) for inv in invariants]
    canonical_a = block_diag(*[m.a_c for m in models])
    canonical_b = block_diag(*[m.b_c for m in models])
    try:
        S_inv = inverse(S, tol)
    except SingularMatrix as exc:
        raise DecompositionFailure(f"summand bases do not form a direct sum: {exc}") from None
    res_rel, res_b2 = relation_residuals(g)
    residuals = {
        "cond_S": cond(S),
        "conjugation_a": norm2(S_inv @ g.a @ S - canonical_a) / norm2(g.a),
        "conjugation_b": norm2(S_inv @ g.b @ S - canonical_b) / norm2(g.b),
        "relation": res_rel,
        "b_squared": res_b2,
    }
    if residuals["cond_S"] > cond_limit:
        msg = f"IllConditionedBasis: cond(S) = {residuals['cond_S']:.3e} exceeds {cond_limit:.1e}"
        report_warnings.append(msg)
        warnings.warn(msg, IllConditionedBasis, stacklevel=2)
    return DecompositionReport(
        summands, sorted_invariants(invariants), S, canonical_a, canonical_b,
        residuals, report_warnings, classes,
    )
