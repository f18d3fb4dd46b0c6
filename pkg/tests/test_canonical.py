import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cspair import canonical
from cspair.canonical import (
    GenerationSpec,
    canonical_model,
    generate,
    invariant,
    invariant_from_dict,
    is_irreducible,
    is_isomorphic,
    normalize_invariant,
    quaternion_J,
)
from cspair.decompose import decompose
from cspair.errors import CondBoundUnreachable, InvalidSpec, NotQuaternionCase
from cspair.pairalg import generators
from cspair.spectral import IrreducibleFactor

from conftest import QUAT

R = np.array([[0.0, -1.0], [1.0, 0.0]])


def test_model_real_n1():
    m = canonical_model(invariant("real", 1, r=2.0))
    np.testing.assert_array_equal(m.a_c, np.diag([2.0, 0.5]))
    np.testing.assert_array_equal(m.b_c, R)


def test_model_real_n2():
    m = canonical_model(invariant("real", 2, r=2.0))
    np.testing.assert_array_equal(m.A, [[2.0, 1.0], [0.0, 2.0]])
    np.testing.assert_array_equal(m.A_inv, [[0.5, -0.25], [0.0, 0.5]])
    np.testing.assert_array_equal(m.b_c, np.kron(R, np.eye(2)))


def test_model_quaternion():
    m = canonical_model(QUAT)
    D = np.array([[0.6, -0.8], [0.8, 0.6]])
    np.testing.assert_array_equal(m.A, D)
    np.testing.assert_allclose(m.A_inv, D.T, atol=1e-15)
    np.testing.assert_array_equal(m.b_c, np.kron(R, np.eye(2)))


models = st.one_of(
    st.builds(
        lambda r, n: invariant("real", n, r=r),
        st.floats(0.2, 5.0) | st.floats(-5.0, -0.2),
        st.integers(1, 5),
    ),
    st.builds(lambda e, f, n: invariant("complex", n, e=e, f=f), st.floats(-2, 2), st.floats(0.2, 2), st.integers(1, 4)),
)


@settings(max_examples=200, deadline=None)
@given(models)
def test_model_relations_and_zero_pattern(inv):
    m = canonical_model(inv)
    h = m.A.shape[0]
    a, b = m.a_c, m.b_c
    a_inv = np.linalg.inv(a)
    assert np.linalg.norm(b @ a @ -b - a_inv, 2) <= 1e-12 * np.linalg.norm(a_inv, 2) * max(1, np.linalg.cond(m.A))
    np.testing.assert_array_equal(b @ b, -np.eye(2 * h))
    assert set(np.unique(b)) <= {-1.0, 0.0, 1.0}
    assert not a[:h, h:].any() and not a[h:, :h].any()
    # A: upper triangular (real) or block upper triangular with D blocks and I superdiagonal blocks
    step = inv.degree
    for i in range(h):
        for j in range(h):
            if j < (i // step) * step or j >= (i // step) * step + 2 * step:
                assert m.A[i, j] == 0.0
                assert m.A_inv[i, j] == 0.0 or j >= (i // step) * step
    np.testing.assert_allclose(m.A @ m.A_inv, np.eye(h), atol=1e-12 * np.linalg.cond(m.A))


def test_j1_recovered_from_generators():
    m = canonical_model(invariant("real", 3, r=-2.0))
    np.testing.assert_allclose(m.J1, -(m.a_c @ m.b_c), atol=0)
    np.testing.assert_allclose(m.J1 @ m.J1, -np.eye(6), atol=1e-14)


@pytest.mark.parametrize(
    "factor, n, expected",
    [
        (IrreducibleFactor.real(0.5), 1, (2.0, 0.0, 0.0)),
        (IrreducibleFactor.real(-1.0), 3, (-1.0, 0.0, 0.0)),
        (IrreducibleFactor.complex(0.0, 0.5), 2, (0.0, 0.0, 2.0)),
    ],
)
def test_normalize_examples(factor, n, expected):
    inv = normalize_invariant(factor, n)
    assert inv.n == n
    assert (inv.factor.r, inv.factor.e, inv.factor.f) == expected


@pytest.mark.parametrize(
    "inv, expected",
    [
        (invariant("real", 1, r=2.0), True),
        (invariant("real", 2, r=2.0), False),
        (QUAT, True),
    ],
)
def test_is_irreducible(inv, expected):
    assert is_irreducible(inv) is expected


def test_isomorphism_examples():
    a = [invariant("real", 1, r=2.0)]
    assert is_isomorphic(a, [invariant("real", 1, r=2.0 + 1e-9)])
    assert not is_isomorphic(a, [invariant("real", 1, r=3.0)])
    assert not is_isomorphic(
        [invariant("real", 2, r=-1.0)], [invariant("real", 1, r=-1.0)] * 2
    )


def test_isomorphism_of_conjugated_report():
    inv = [invariant("real", 1, r=2.0)]
    r1 = decompose(generators(generate(GenerationSpec(inv, seed=0, cond_bound=1.5)).pair))
    r2 = decompose(generators(generate(GenerationSpec(inv, seed=9)).pair))
    assert is_isomorphic(r1, r2)


@settings(max_examples=50, deadline=None)
@given(st.lists(models, min_size=1, max_size=3), st.lists(models, min_size=1, max_size=3), st.lists(models, min_size=1, max_size=3))
def test_isomorphism_is_equivalence(x, y, z):
    assert is_isomorphic(x, x)
    assert is_isomorphic(x, y) == is_isomorphic(y, x)
    if is_isomorphic(x, y) and is_isomorphic(y, z):
        assert is_isomorphic(x, z)
    assert is_isomorphic(x, list(reversed(x)))


def test_generate_small_recovers():
    gen = generate(GenerationSpec([invariant("real", 1, r=2.0)], seed=42))
    assert gen.pair.dim == 2 and gen.cond_S <= 100
    report = decompose(generators(gen.pair))
    assert is_isomorphic(report, gen.invariants)


def test_generate_mixed_recovers():
    spec = GenerationSpec([invariant("real", 2, r=-1.0), QUAT], seed=3)
    gen = generate(spec)
    assert gen.pair.dim == 8
    assert is_isomorphic(decompose(generators(gen.pair)), gen.invariants)


def test_generate_deterministic():
    spec = GenerationSpec([invariant("real", 2, r=-1.0), QUAT], seed=11)
    first, second = generate(spec), generate(spec)
    assert np.array_equal(first.pair.J1, second.pair.J1)
    assert np.array_equal(first.pair.J2, second.pair.J2)


def test_generate_normalizes_spec():
    gen = generate(GenerationSpec([invariant("real", 1, r=0.5)], seed=0))
    assert gen.invariants[0].factor.r == 2.0


def test_cond_bound_unreachable(monkeypatch):
    monkeypatch.setattr(canonical, "MAX_DRAWS", 3)
    with pytest.raises(CondBoundUnreachable):
        generate(GenerationSpec([invariant("real", 1, r=2.0)] * 8, seed=0, cond_bound=float(np.nextafter(1.0, 2.0))))


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        GenerationSpec([], seed=0)
    with pytest.raises(InvalidSpec):
        GenerationSpec([QUAT], cond_bound=1.0)
    with pytest.raises(InvalidSpec):
        invariant_from_dict({"kind": "real", "r": 2.0, "n": 0})
    with pytest.raises(InvalidSpec):
        invariant_from_dict({"kind": "octonion"})


def test_quaternion_J_example():
    J = quaternion_J(canonical_model(QUAT))
    expected = np.zeros((4, 4))
    expected[:2, :2] = R
    expected[2:, 2:] = -R
    np.testing.assert_allclose(J, expected, atol=1e-15)


def test_quaternion_J_at_i_is_a():
    m = canonical_model(invariant("complex", 1, e=0.0, f=1.0))
    np.testing.assert_array_equal(quaternion_J(m), m.a_c)


@pytest.mark.parametrize(
    "inv", [invariant("real", 1, r=-1.0), invariant("complex", 2, e=0.6, f=0.8), invariant("complex", 1, e=1.0, f=1.0)]
)
def test_quaternion_J_rejects(inv):
    with pytest.raises(NotQuaternionCase):
        quaternion_J(canonical_model(inv))


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, np.pi - 1e-3))
def test_quaternion_J_anticommutes(theta):
    m = canonical_model(invariant("complex", 1, e=np.cos(theta), f=np.sin(theta)))
    J = quaternion_J(m)
    assert np.linalg.norm(J @ J + np.eye(4), 2) <= 1e-12
    assert np.linalg.norm(J @ m.b_c + m.b_c @ J, 2) <= 1e-12
