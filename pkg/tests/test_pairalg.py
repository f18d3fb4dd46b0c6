import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cspair.canonical import GenerationSpec, generate, invariant
from cspair.errors import DimensionMismatch, NotAComplexStructure, OddDimension
from cspair.pairalg import (
    GeneratorPair,
    generators,
    pair_from_generators,
    relation_residuals,
    validate_pair,
)

from conftest import QUAT, model_pair

R = np.array([[0.0, -1.0], [1.0, 0.0]])


def test_rotation_pair_accepted():
    pair = validate_pair(R, R)
    assert pair.dim == 2


def test_identity_rejected():
    with pytest.raises(NotAComplexStructure) as info:
        validate_pair(np.eye(2), R)
    assert info.value.which == "J1"
    assert info.value.residual == pytest.approx(2.0)


def test_odd_dimension():
    with pytest.raises(OddDimension):
        validate_pair(np.eye(3), np.eye(3))


def test_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        validate_pair(R, np.kron(np.eye(2), R))


def test_generators_same_rotation():
    g = generators(validate_pair(R, R))
    np.testing.assert_array_equal(g.a, -np.eye(2))
    np.testing.assert_array_equal(g.b, R)


def test_generators_opposite_rotation():
    g = generators(validate_pair(R, -R))
    np.testing.assert_array_equal(g.a, np.eye(2))


def test_quaternion_spectrum():
    g = generators(model_pair([QUAT]))
    ev = np.sort_complex(np.linalg.eigvals(g.a))
    np.testing.assert_allclose(ev, [0.6 - 0.8j, 0.6 - 0.8j, 0.6 + 0.8j, 0.6 + 0.8j], atol=1e-12)


def test_trivial_residuals_exact():
    g = GeneratorPair.from_ab(np.eye(2), R)
    assert relation_residuals(g) == (0.0, 0.0)


def test_perturbation_reported_not_rejected():
    rng = np.random.default_rng(5)
    pair = model_pair([invariant("real", 1, r=2.0), invariant("real", 1, r=3.0)])
    g = GeneratorPair.from_ab(pair.J1 @ pair.J2 + 1e-3 * rng.standard_normal((4, 4)), pair.J2)
    res_rel, _ = relation_residuals(g)
    assert 1e-5 < res_rel < 1e-1


def test_pair_from_generators_inverts_generators():
    pair = model_pair([invariant("real", 2, r=-1.0)])
    g = generators(pair)
    J1, J2 = pair_from_generators(g.a, g.b)
    np.testing.assert_allclose(J1, pair.J1, atol=1e-15)
    np.testing.assert_array_equal(J2, pair.J2)


kinds = st.one_of(
    st.builds(lambda r, n: invariant("real", n, r=r), st.sampled_from([-3.0, -1.0, 1.0, 1.5, 2.0]), st.integers(1, 3)),
    st.builds(
        lambda t, m, n: invariant("complex", n, e=m * np.cos(t), f=m * np.sin(t)),
        st.floats(0.2, 2.9),
        st.sampled_from([1.0, 1.7]),
        st.integers(1, 2),
    ),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(kinds, min_size=1, max_size=3), st.integers(0, 2**32))
def test_relation_holds_on_generated_pairs(invs, seed):
    pair = generate(GenerationSpec(invs, seed=seed)).pair
    g = generators(pair)
    res_rel, res_b2 = relation_residuals(g)
    # rounding in a = J1 J2 is relative to |J1| |J2| and conjugating by b
    # amplifies it by |b| |b^-1| = |J2|^2; both grow with cond(S)
    n1, n2 = np.linalg.norm(pair.J1, 2), np.linalg.norm(pair.J2, 2)
    assert res_rel <= 10 * np.finfo(float).eps * pair.dim * n1 * n2**3
    assert res_rel <= 1e-9 * np.linalg.cond(g.a)
    assert res_b2 <= 1e-10
    # spectrum closed under inversion, and zero never appears
    ev = np.linalg.eigvals(g.a)
    assert np.min(np.abs(ev)) > 0
    inv = np.sort_complex(1.0 / ev)
    scale = np.max(np.abs(ev)) * np.max(np.abs(inv))
    for z in inv:
        assert np.min(np.abs(ev - z)) <= 1e-4 * scale
