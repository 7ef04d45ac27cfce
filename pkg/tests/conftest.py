import math

import numpy as np
import pytest

from fano.model import InitialState, SystemParams, pure_state

GAMMA = 3.0091e6
D_CENTER = 0.785e9


def certification_params(p=-1.0, nbar=3.0):
    return SystemParams(GAMMA, GAMMA, 0.1 * GAMMA, D_CENTER, nbar, p)


def certification_state(phi_b=math.pi):
    return InitialState.from_populations(0.3, 0.3, 0.4, 0.0, phi_b, 0.0)


def random_pure_state(rng) -> np.ndarray:
    psi = rng.normal(size=3) + 1j * rng.normal(size=3)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_params(rng) -> SystemParams:
    return SystemParams(
        gamma_a=rng.uniform(1e6, 1e7),
        gamma_b=rng.uniform(1e6, 1e7),
        delta=rng.uniform(0.0, 2e6),
        d_center=D_CENTER,
        nbar=rng.uniform(0.0, 5.0),
        p=rng.uniform(-1.0, 1.0),
    )


@pytest.fixture
def params():
    return certification_params()


@pytest.fixture
def rho_cert():
    return pure_state(certification_state())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
