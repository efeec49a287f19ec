import numpy as np
import pytest
from hypothesis import strategies as st

# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES = []

finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)


@st.composite
def unit_vectors(draw):
    v = draw(vec3.filter(lambda x: np.linalg.norm(x) > 1e-3))
    return v / np.linalg.norm(v)


@st.composite
def bloch_vectors(draw, pure=False):
    v = draw(unit_vectors())
    r = 1.0 if pure else draw(st.floats(0.0, 1.0))
    return r * v


def pair_with_inner(ab):
    """Directions a = x, b in the xy-plane with a.b = ab."""
    return np.array([1.0, 0.0, 0.0]), np.array([ab, np.sqrt(1.0 - ab * ab), 0.0])


def random_unit(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_ball(rng, n):
    return random_unit(rng, n) * np.cbrt(rng.random(n))[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
