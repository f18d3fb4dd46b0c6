import numpy as np
import pytest

from cspair.canonical import assemble_models, invariant
from cspair.matlin import DEFAULT_TOL
from cspair.pairalg import GeneratorPair, validate_pair

QUAT = invariant("complex", 1, e=0.6, f=0.8)


def model_generators(invariants):
    a, b, _, _ = assemble_models(invariants)
    return GeneratorPair.from_ab(a, b)


def model_pair(invariants):
    _, _, J1, J2 = assemble_models(invariants)
    return validate_pair(J1, J2)


def conjugated_generators(invariants, S):
    a, b, _, _ = assemble_models(invariants)
    S_inv = np.linalg.inv(S)
    return GeneratorPair.from_ab(S @ a @ S_inv, S @ b @ S_inv)


def random_orthogonal(d, seed):
    q, r = np.linalg.qr(np.random.default_rng(seed).standard_normal((d, d)))
    return q * np.sign(np.diag(r))


@pytest.fixture
def tol():
    return DEFAULT_TOL


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
