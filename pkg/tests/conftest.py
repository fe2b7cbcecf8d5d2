import math

import numpy as np
import pytest
from hypothesis import strategies as st

from locctransform.states import PureState, from_schmidt_coefficients

# Schmidt spectra of the two 3x3 example states that neither transform into each other
EXAMPLE_PSI = (1 / 2, 2 / 5, 1 / 10)
EXAMPLE_PHI = (3 / 5, 1 / 5, 1 / 5)


def random_state(rng, dim_a, dim_b=None):
    dim_b = dim_a if dim_b is None else dim_b
    amp = rng.standard_normal((dim_a, dim_b)) + 1j * rng.standard_normal((dim_a, dim_b))
    return PureState(amp / np.linalg.norm(amp))


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_prob(rng, d, sparsity=0.0):
    v = rng.exponential(size=d)
    v[rng.random(d) < sparsity] = 0.0
    if v.sum() == 0:
        v[0] = 1.0
    return v / v.sum()


def majorizing_pair(rng, d):
    """Random (x, y) with x ≺ y, built as x = D y for a random doubly stochastic D."""
    y = random_prob(rng, d, sparsity=0.2)
    x = y.copy()
    for _ in range(rng.integers(0, 2 * d) if d > 1 else 0):
        i, j = rng.choice(d, 2, replace=False)
        t = rng.random()
        x[i], x[j] = t * x[i] + (1 - t) * x[j], (1 - t) * x[i] + t * x[j]
    return rng.permutation(x), rng.permutation(y)


@st.composite
def prob_vectors(draw, min_size=1, max_size=8):
    n = draw(st.integers(min_size, max_size))
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    raw = np.array(raw)
    if raw.sum() < 1e-6:
        raw[0] = 1.0
    return raw / raw.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture
def bell():
    return PureState(np.array([[1, 0], [0, 1]]) / math.sqrt(2))


@pytest.fixture
def example_psi():
    return from_schmidt_coefficients(EXAMPLE_PSI, 3, 3)


@pytest.fixture
def example_phi():
    return from_schmidt_coefficients(EXAMPLE_PHI, 3, 3)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance
    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
