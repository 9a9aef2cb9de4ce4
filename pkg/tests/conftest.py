import numpy as np
import pytest

from hotgate.classical_noise import build_ensemble, cold_mediator_chain
from hotgate.geometry import CouplingLaw
from hotgate.utils_for_testing import seeded_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return seeded_rng(20240611)


@pytest.fixture
def unit_law() -> CouplingLaw:
    return CouplingLaw(J=1.0, gamma=1)


@pytest.fixture(scope="session")
def fig2c_ensemble():
    """Cold-mediator chain with the Fig. 2(c) geometry, N_A = 4."""
    model = cold_mediator_chain(4, dx=1.0, dy=1.0, sigma=3.0)
    return build_ensemble(model, CouplingLaw(J=1.0, gamma=1))
