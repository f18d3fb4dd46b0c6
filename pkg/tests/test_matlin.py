import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cspair.errors import InvalidMatrix, SingularMatrix
from cspair.matlin import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_matrix,
    inverse,
    least_norm_solve,
    nullspace,
    rank,
)


def test_nullspace_of_zero_is_everything():
    r, basis = nullspace(np.zeros((2, 2)))
    assert r == 0
    np.testing.assert_allclose(basis.T @ basis, np.eye(2), atol=1e-15)


def test_nullspace_of_identity_is_empty():
    r, basis = nullspace(np.eye(3))
    assert r == 3 and basis.shape == (3, 0)


def test_nullspace_rank_one():
    r, basis = nullspace(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert r == 1
    v = basis[:, 0] * np.sign(basis[0, 0])
    np.testing.assert_allclose(v, np.array([1.0, -1.0]) / np.sqrt(2), atol=1e-15)


def test_nullspace_rejects_non_finite():
    with pytest.raises(InvalidMatrix):
        nullspace(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_nullspace_scale_detects_numerical_zero():
    tiny = np.diag([1e-15, 2e-15])
    assert nullspace(tiny)[0] == 2
    assert nullspace(tiny, scale=1.0)[0] == 0


@pytest.mark.parametrize(
    "m, expected",
    [
        (np.eye(3), np.eye(3)),
        (np.array([[0.0, -1.0], [1.0, 0.0]]), np.array([[0.0, 1.0], [-1.0, 0.0]])),
        (np.diag([2.0, 0.5]), np.diag([0.5, 2.0])),
    ],
)
def test_inverse_examples(m, expected):
    np.testing.assert_allclose(inverse(m), expected, atol=1e-15)


def test_inverse_singular():
    with pytest.raises(SingularMatrix):
        inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))


@pytest.mark.parametrize(
    "m, y, expected",
    [
        (np.eye(2), [1.0, 2.0], [1.0, 2.0]),
        (np.array([[1.0, 0.0], [0.0, 0.0]]), [3.0, 0.0], [3.0, 0.0]),
        # normal equations: 2x = 1 + 3
        (np.array([[1.0], [1.0]]), [1.0, 3.0], [2.0]),
    ],
)
def test_least_norm_solve_examples(m, y, expected):
    x, _ = least_norm_solve(m, np.array(y))
    np.testing.assert_allclose(x, expected, atol=1e-14)


def test_least_norm_solve_reports_residual():
    _, res = least_norm_solve(np.array([[1.0], [1.0]]), np.array([1.0, 3.0]))
    assert res == pytest.approx(np.sqrt(2.0))


def test_tolerance_policy_validation():
    with pytest.raises(ValueError):
        TolerancePolicy(rank_rel=0.0)
    with pytest.raises(ValueError):
        TolerancePolicy(residual_rel=1.5)


def test_as_matrix_rejects_ragged():
    with pytest.raises(InvalidMatrix):
        as_matrix([[1.0, 2.0], [3.0]])


matrices = st.integers(1, 6).flatmap(
    lambda n: st.integers(1, 6).flatmap(
        lambda m: arrays(np.float64, (n, m), elements=st.floats(-10, 10, allow_nan=False, width=64))
    )
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_rank_nullity(m):
    r, basis = nullspace(m)
    assert r + basis.shape[1] == m.shape[1]
    assert r == rank(m)
    np.testing.assert_allclose(basis.T @ basis, np.eye(basis.shape[1]), atol=1e-12)
    if basis.shape[1]:
        tol = DEFAULT_TOL.rank_rel * max(m.shape) * max(np.linalg.norm(m, 2), 1e-300)
        assert np.linalg.norm(m @ basis, axis=0).max() <= tol * 10 + 1e-300


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10_000))
def test_double_inverse(n, seed):
    rng = np.random.default_rng(seed)
    u, _ = np.linalg.qr(rng.standard_normal((n, n)))
    v, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = np.exp(rng.uniform(0, np.log(1e6), n))
    m = u @ np.diag(s) @ v
    back = inverse(inverse(m))
    assert np.linalg.norm(back - m, 2) / np.linalg.norm(m, 2) <= 1e-8
