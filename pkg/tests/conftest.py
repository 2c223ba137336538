import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from hhgcat.coherent import StateSuperposition, normalize

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def amplitudes(radius=2.5):
    """Complex labels inside the disk |a| <= radius."""
    return st.builds(
        lambda r, t: complex(radius * np.sqrt(r) * np.exp(2j * np.pi * t)),
        st.floats(0, 1),
        st.floats(0, 1),
    )


coeffs = st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)).filter(lambda c: abs(c) > 1e-3)


@st.composite
def states(draw, num_modes=1, max_terms=6, radius=2.5, normalized=True):
    n = draw(st.integers(1, max_terms))
    terms = [(draw(coeffs), [draw(amplitudes(radius)) for _ in range(num_modes)]) for _ in range(n)]
    s = StateSuperposition.from_terms(terms, num_modes=num_modes)
    if normalized:
        if s.norm_squared() < 1e-6:
            s = StateSuperposition.coherent(*[0.0] * num_modes)
        s = normalize(s)
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
