import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qubitpair.model import ModelParams, XState


@pytest.fixture
def default_params():
    return ModelParams(coupling_k=20.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240810)


def random_xstate(rng: np.random.Generator) -> XState:
    p = rng.dirichlet(np.ones(4))
    cap = math.sqrt(p[1] * p[2])
    phase = 2.0 * math.pi * rng.uniform()
    coh = rng.uniform() * cap * complex(math.cos(phase), math.sin(phase))
    return XState(p00=p[0], p10=p[1], p01=p[2], p11=p[3], coh=coh)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / rho.trace()


@st.composite
def xstates(draw):
    """Hypothesis strategy for valid X-states (rho_14 = 0)."""
    raw = [draw(st.floats(1e-4, 1.0)) for _ in range(4)]
    total = sum(raw)
    p = [v / total for v in raw]
    frac = draw(st.floats(0.0, 1.0))
    phase = draw(st.floats(0.0, 2.0 * math.pi))
    cap = math.sqrt(p[1] * p[2])
    coh = frac * cap * complex(math.cos(phase), math.sin(phase))
    return XState(p00=p[0], p10=p[1], p01=p[2], p11=p[3], coh=coh)


@st.composite
def bloch_directions(draw):
    z = draw(st.floats(-1.0, 1.0))
    phi = draw(st.floats(0.0, 2.0 * math.pi))
    s = math.sqrt(max(0.0, 1.0 - z * z))
    return np.array([s * math.cos(phi), s * math.sin(phi), z])
