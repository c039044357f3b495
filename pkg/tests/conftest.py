import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EXAMPLE_PSI = np.array([0.5, np.exp(2j * np.pi / 3) / np.sqrt(2), 0.5])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def example_rho():
    return np.outer(EXAMPLE_PSI, EXAMPLE_PSI.conj())


finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian_matrices(draw, d=3):
    re = np.array(draw(st.lists(finite, min_size=d * d, max_size=d * d))).reshape(d, d)
    im = np.array(draw(st.lists(finite, min_size=d * d, max_size=d * d))).reshape(d, d)
    m = re + 1j * im
    return 0.5 * (m + m.conj().T)


@st.composite
def density_matrices(draw, d=3, rank=None):
    """Random PSD trace-one matrices built as V V^dagger."""
    r = rank or draw(st.integers(1, d))
    seed = draw(st.integers(0, 2**32 - 1))
    g = np.random.default_rng(seed)
    v = g.normal(size=(d, r)) + 1j * g.normal(size=(d, r))
    m = v @ v.conj().T
    m = 0.5 * (m + m.conj().T)
    return m / np.trace(m).real


@st.composite
def pure_states(draw, d=3):
    seed = draw(st.integers(0, 2**32 - 1))
    g = np.random.default_rng(seed)
    v = g.normal(size=d) + 1j * g.normal(size=d)
    return v / np.linalg.norm(v)
