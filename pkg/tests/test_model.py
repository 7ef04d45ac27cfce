import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fano.model import (
    Hamiltonian,
    InitialState,
    InvalidParamsError,
    InvalidStateError,
    RepresentationError,
    SystemParams,
    check_density,
    from_xz,
    pure_state,
    split_diag_coh,
    to_dimless,
    to_seconds,
    to_xz,
)

from conftest import GAMMA, certification_params, certification_state


def test_pure_state_certification_preset():
    rho = pure_state(certification_state())
    assert rho[0, 0].real == pytest.approx(0.3, abs=1e-15)
    assert rho[1, 1].real == pytest.approx(0.3, abs=1e-15)
    assert rho[2, 2].real == pytest.approx(0.4, abs=1e-15)
    assert rho[0, 1] == pytest.approx(-0.3, abs=1e-15)
    assert rho[0, 2] == pytest.approx(math.sqrt(0.12), abs=1e-15)
    assert rho[1, 2] == pytest.approx(-math.sqrt(0.12), abs=1e-15)


@pytest.mark.parametrize("phases", [(0, 0, 0), (1.0, 2.0, 3.0), (6.0, 0.5, 4.4)])
def test_ground_state_ignores_phases(phases):
    rho = pure_state(InitialState(0.0, 0.0, 1.0, *phases))
    np.testing.assert_allclose(rho, np.diag([0, 0, 1]), atol=0)


def test_symmetric_superposition():
    rho = pure_state(InitialState(1 / math.sqrt(2), 1 / math.sqrt(2), 0.0))
    np.testing.assert_allclose(rho, [[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 0]], atol=1e-15)


def test_unnormalized_state_rejected():
    with pytest.raises(InvalidStateError):
        InitialState(0.5, 0.5, 0.5)
    with pytest.raises(InvalidStateError):
        InitialState(-math.sqrt(0.5), math.sqrt(0.5), 0.0)


def test_invalid_params_rejected():
    base = dict(gamma_a=GAMMA, gamma_b=GAMMA, delta=0.0, d_center=1e9, nbar=1.0, p=0.0)
    for key, bad in [("gamma_a", 0.0), ("delta", -1.0), ("nbar", -0.1), ("p", 1.5), ("d_center", float("nan"))]:
        with pytest.raises(InvalidParamsError):
            SystemParams(**{**base, key: bad})


def test_derived_quantities():
    params = certification_params()
    assert params.omega_a == pytest.approx(0.785e9 + 0.05 * GAMMA)
    assert params.omega_b == pytest.approx(0.785e9 - 0.05 * GAMMA)
    assert params.rate_a == pytest.approx(3 * GAMMA)
    assert params.gamma_bar == GAMMA
    ham = Hamiltonian.from_params(params)
    assert ham.e_c <= ham.e_b <= ham.e_a
    de = ham.energy_changes()
    assert de[2, 0] == ham.e_a and de[0, 2] == -ham.e_a


def test_time_conventions():
    params = certification_params()
    assert to_seconds(params, 1.0, "rate") == pytest.approx(1 / GAMMA)
    assert to_seconds(params, 1.0, "cycle") == pytest.approx(2 * math.pi / GAMMA)
    assert to_dimless(params, to_seconds(params, 0.37)) == pytest.approx(0.37)
    with pytest.raises(ValueError):
        to_seconds(params, 1.0, "weeks")


def test_split_certification_state():
    diag, coh = split_diag_coh(pure_state(certification_state()))
    np.testing.assert_allclose(diag, np.diag([0.3, 0.3, 0.4]), atol=1e-15)
    assert coh[0, 1] == pytest.approx(-0.3)
    assert np.all(np.diag(coh) == 0)


def test_split_diagonal_and_plus_state():
    diag, coh = split_diag_coh(np.diag([0.2, 0.3, 0.5]))
    assert np.all(coh == 0)
    plus = np.array([[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 0]], dtype=complex)
    diag, coh = split_diag_coh(plus)
    np.testing.assert_array_equal(diag, np.diag([0.5, 0.5, 0]))
    assert coh[0, 1] == 0.5 and coh[1, 0] == 0.5


def test_to_xz_examples():
    x, z = to_xz(np.diag([0.3, 0.3, 0.4]))
    np.testing.assert_array_equal(x, [0.3, 0.3, 0.4, 0, 0])
    np.testing.assert_array_equal(z, [0, 0, 0, 0])
    x, _ = to_xz(pure_state(certification_state()))
    assert x[3] == pytest.approx(-0.3)
    assert abs(x[4]) < 1e-15


def test_to_xz_rejects_non_hermitian():
    with pytest.raises(RepresentationError):
        to_xz(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))


def test_check_density():
    check_density(pure_state(certification_state()))
    with pytest.raises(InvalidStateError):
        check_density(np.diag([0.5, 0.6, 0.0]))
    with pytest.raises(InvalidStateError):
        check_density(np.diag([1.2, -0.2, 0.0]))


hermitian_entries = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.lists(hermitian_entries, min_size=9, max_size=9))
def test_xz_round_trip(vals):
    h = np.zeros((3, 3), dtype=complex)
    h[np.diag_indices(3)] = vals[:3]
    h[0, 1], h[0, 2], h[1, 2] = vals[3] + 1j * vals[4], vals[5] + 1j * vals[6], vals[7] + 1j * vals[8]
    h = np.triu(h) + np.triu(h, 1).conj().T
    x, z = to_xz(h)
    assert np.max(np.abs(from_xz(x, z) - h)) <= 1e-15
    assert x[:3].sum() == pytest.approx(np.trace(h).real, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(0, 1), min_size=3, max_size=3).filter(lambda v: sum(v) > 1e-3),
    st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=3, max_size=3),
)
def test_pure_state_properties(weights, phases):
    total = sum(weights)
    init = InitialState.from_populations(*(w / total for w in weights), *phases)
    rho = check_density(pure_state(init))
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 1
    diag, coh = split_diag_coh(rho)
    np.testing.assert_array_equal(diag + coh, rho)
    assert abs(np.trace(coh)) == 0
    np.testing.assert_allclose(coh, coh.conj().T, atol=0)
