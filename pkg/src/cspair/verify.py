"""Independent checks that do not rely on the classification.

:func:`verify_report` recomputes every residual of a decomposition from the
raw matrices. :func:`commutant` and :func:`split_attempt` look for a
nontrivial idempotent commuting with ``a`` and ``b``, which exists exactly
when the representation is decomposable. The search is randomized, so
``NoSplitFound`` is evidence of indecomposability, not proof.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from cspair.errors import DimensionMismatch
from cspair.matlin import DEFAULT_TOL, cond, inverse, norm2, nullspace
from cspair.pairalg import generators, relation_residuals
from cspair.rng import substream
from cspair.spectral import cluster_values


@dataclass
class VerificationSummary:
    passed: bool
    residuals: dict
    bounds: dict
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {
            "status": "PASS" if self.passed else "FAIL",
            "residuals": self.residuals,
            "bounds": self.bounds,
            "failures": self.failures,
        }


def invariance_residual(m, basis):
    """Relative distance of ``m @ basis`` from ``span(basis)``."""
    q, _ = np.linalg.qr(basis)
    img = m @ basis
    return norm2(img - q @ (q.T @ img)) / max(norm2(m) * norm2(basis), 1e-300)


def verify_report(pair, report, tol=DEFAULT_TOL):
    """Recompute the residuals of ``report`` against the raw pair.

    Checks that ``S`` is invertible, that ``S^-1 a S`` and ``S^-1 b S`` equal
    the report's canonical matrices, that every summand block spans a
    subspace invariant under ``J1`` and ``J2``, and the relation residuals.
    Each check passes when it is at most ``residual_rel * cond(S)``.
    """
    S = np.asarray(report.S, dtype=np.float64)
    d = pair.dim
    if S.shape != (d, d) or np.shape(report.canonical_a) != (d, d) or np.shape(report.canonical_b) != (d, d):
        raise DimensionMismatch(f"report matrices do not match the pair dimension {d}")
    if sum(report.block_dims) != d:
        raise DimensionMismatch("report block sizes do not add up to the pair dimension")
    g = generators(pair, tol)
    failures = []
    cond_S = cond(S)
    bound = tol.residual_rel * max(cond_S, 1.0)
    residuals = {"cond_S": cond_S}
    if not np.isfinite(cond_S) or cond_S * tol.rank_rel * d >= 1.0:
        failures.append("S is numerically singular")
        return VerificationSummary(False, residuals, {"scaled": bound}, failures)
    S_inv = inverse(S, tol)
    residuals["conjugation_a"] = norm2(S_inv @ g.a @ S - report.canonical_a) / norm2(g.a)
    residuals["conjugation_b"] = norm2(S_inv @ g.b @ S - report.canonical_b) / norm2(g.b)
    worst = 0.0
    start = 0
    for size in report.block_dims:
        block = S[:, start:start + size]
        worst = max(worst, invariance_residual(pair.J1, block), invariance_residual(pair.J2, block))
        start += size
    residuals["invariance"] = worst
    res_rel, res_b2 = relation_residuals(g)
    residuals["relation"] = res_rel
    residuals["b_squared"] = res_b2
    for name in ("conjugation_a", "conjugation_b", "invariance", "relation", "b_squared"):
        if not residuals[name] <= bound:
            failures.append(f"{name} residual {residuals[name]:.3e} exceeds {bound:.3e}")
    return VerificationSummary(not failures, residuals, {"scaled": bound}, failures)


@dataclass
class CommutantBasis:
    dim: int
    elements: list


def commutant(g, tol=DEFAULT_TOL):
    """Basis of ``{X : X a = a X, X b = b X}`` via the nullspace of the stacked commutation operator."""
    d = g.dim
    eye = np.eye(d)
    # column-major vec: vec(X M) = (M^T kron I) vec X, vec(M X) = (I kron M) vec X
    op = np.vstack([np.kron(g.a.T, eye) - np.kron(eye, g.a), np.kron(g.b.T, eye) - np.kron(eye, g.b)])
    _, null = nullspace(op, tol)
    elements = [null[:, i].reshape(d, d, order="F") for i in range(null.shape[1])]
    return CommutantBasis(len(elements), elements)


@dataclass
class SplitFound:
    projector: np.ndarray
    trial: int
    residuals: dict

    @property
    def rank(self):
        return int(round(np.trace(self.projector)))


@dataclass
class NoSplitFound:
    trials: int


def _cluster_eigenvalues(m, tol):
    """Eigenvalue clusters of a real matrix with each conjugate pair folded into one cluster."""
    ev = np.linalg.eigvals(m)
    folded = ev.real + 1j * np.abs(ev.imag)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    return ev, cluster_values(folded / scale, tol)


def spectral_projector(m, members, others):
    """Real projector onto the invariant subspace of ``m`` for eigenvalues near ``members``.

    ``members`` and ``others`` hold folded eigenvalues (``Im >= 0``); an
    eigenvalue belongs to the selected cluster when it is nearer to
    ``members`` than to ``others``. The projection is along the
    complementary invariant subspace.
    """
    members = np.asarray(members)
    others = np.asarray(others) if len(others) else np.array([np.inf])

    def inside(re, im):
        z = complex(re, abs(im))
        return bool(np.min(np.abs(members - z)) <= np.min(np.abs(others - z)))

    _, z1, k = sla.schur(m, output="real", sort=inside)
    _, z2, k2 = sla.schur(m, output="real", sort=lambda re, im: not inside(re, im))
    basis = np.hstack([z1[:, :k], z2[:, :k2]])
    if basis.shape[1] != m.shape[0]:
        return None
    coords = np.linalg.solve(basis, np.eye(m.shape[0]))
    return basis[:, :k] @ coords[:k]


def certify_projector(proj, g, tol=1e-8):
    """Residuals of the idempotent certificate and whether they pass."""
    res = {
        "idempotent": norm2(proj @ proj - proj),
        "commutes_a": norm2(proj @ g.a - g.a @ proj) / norm2(g.a),
        "commutes_b": norm2(proj @ g.b - g.b @ proj) / norm2(g.b),
        "rank": float(np.trace(proj)),
    }
    rk = int(round(res["rank"]))
    ok = (
        res["idempotent"] <= tol
        and res["commutes_a"] <= tol
        and res["commutes_b"] <= tol
        and 0 < rk < g.dim
        and abs(res["rank"] - rk) <= 1e-6
    )
    return ok, res


def split_attempt(g, seed=0, trials=10, tol=DEFAULT_TOL, basis=None):
    """Look for a certified idempotent in the commutant of ``(a, b)``.

    Each trial draws a random commutant element ``M`` from the substream
    ``(seed, trial)``. If ``M`` has at least two eigenvalue clusters
    (conjugate pairs count once), the spectral projector onto the first
    cluster is a polynomial in ``M`` and hence commutes with ``a`` and ``b``;
    it is returned only once those residuals certify it.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    basis = basis or commutant(g, tol)
    if basis.dim < 2:
        return NoSplitFound(trials)
    for trial in range(trials):
        coef = substream(seed, trial).uniform(-1.0, 1.0, basis.dim)
        m = sum(c * x for c, x in zip(coef, basis.elements))
        ev, clusters = _cluster_eigenvalues(m, tol)
        if len(clusters) < 2:
            continue
        folded = ev.real + 1j * np.abs(ev.imag)
        rest = np.concatenate([folded[c] for c in clusters[1:]])
        proj = spectral_projector(m, folded[clusters[0]], rest)
        if proj is None:
            continue
        ok, res = certify_projector(proj, g)
        if ok:
            return SplitFound(proj, trial, res)
    return NoSplitFound(trials)
