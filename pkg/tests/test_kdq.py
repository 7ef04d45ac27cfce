import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fano.kdq import KdqDistribution, average_energy_change, kdq, kdq_series, nonpositivity, tpm
from fano.liouville import apply_channel_hermitian, build_generators
from fano.model import Hamiltonian, InitialState, SystemParams, pure_state, split_diag_coh, to_seconds

from conftest import GAMMA, certification_params, certification_state, random_params, random_pure_state


def test_zero_time_is_diagonal_table(rng):
    params = certification_params()
    rho = random_pure_state(rng)
    dist = kdq(params, rho, 0.0)
    np.testing.assert_allclose(dist.q, np.diag(np.diag(rho)), atol=1e-15)


def test_invariants_at_random_time(rng):
    params = random_params(rng)
    rho = random_pure_state(rng)
    t = 0.8 / params.gamma_bar
    dist = kdq(params, rho, t)
    assert abs(dist.q.sum() - 1) <= 1e-10
    np.testing.assert_allclose(dist.initial_marginal, np.diag(rho), atol=1e-10)
    rho_t = apply_channel_hermitian(build_generators(params), rho, t)
    np.testing.assert_allclose(dist.final_marginal, np.diag(rho_t), atol=1e-10)
    np.testing.assert_array_equal(dist.q, dist.q_diag + dist.q_coh)


def test_series_matches_pointwise(rng):
    params = random_params(rng)
    rho = random_pure_state(rng)
    times = np.linspace(0, 1.2, 5) / params.gamma_bar
    series = kdq_series(params, rho, times)
    for k, t in enumerate(times):
        dist = kdq(params, rho, t)
        np.testing.assert_allclose(series.q[k], dist.q, atol=1e-13)
        np.testing.assert_allclose(series.q_coh[k], dist.q_coh, atol=1e-13)
        assert series.aleph[k] == pytest.approx(nonpositivity(dist), abs=1e-12)


def test_diagonal_state_equals_tpm():
    params = certification_params(p=-0.6)
    rho = np.diag([0.25, 0.35, 0.4]).astype(complex)
    for tau in (0.0, 0.2, 1.0):
        t = tau / GAMMA
        dist = kdq(params, rho, t)
        assert np.max(np.abs(dist.q - tpm(params, rho, t))) <= 1e-10
        assert nonpositivity(dist) <= 1e-10


def test_tpm_examples():
    params = certification_params()
    rho = pure_state(certification_state())
    np.testing.assert_allclose(tpm(params, rho, 0.0), np.diag([0.3, 0.3, 0.4]), atol=1e-15)
    table = tpm(params, rho, 0.5 / GAMMA)
    assert np.all(table >= -1e-15) and np.all(table <= 1)
    assert table.sum() == pytest.approx(1, abs=1e-10)
    dark = SystemParams(GAMMA, GAMMA, 0.1 * GAMMA, 1e9, 0.0, -1.0)
    ground = np.diag([0, 0, 1]).astype(complex)
    expected = np.zeros((3, 3))
    expected[2, 2] = 1
    np.testing.assert_allclose(tpm(dark, ground, 2.0 / GAMMA), expected, atol=1e-15)


def test_kdq_marginal_differs_from_tpm_with_coherence():
    params = certification_params(p=-1.0)
    rho = pure_state(certification_state())
    series = kdq_series(params, rho, to_seconds(params, np.linspace(0, 1.5, 151)))
    diffs = [
        np.max(np.abs(series.q[k].sum(axis=0) - tpm(params, rho, t).sum(axis=0)))
        for k, t in enumerate(series.times)
    ]
    assert max(diffs) > 1e-3


def test_nonpositivity_definition():
    q = np.zeros((3, 3), dtype=complex)
    q[0, 0], q[0, 1] = 0.5, 0.5j
    assert nonpositivity(q) == pytest.approx(0.0, abs=1e-15)
    q = np.diag([0.2, 0.3, 0.5]).astype(complex)
    assert nonpositivity(q) == pytest.approx(0.0, abs=1e-15)
    q[0, 1], q[1, 1] = -0.1, 0.4
    assert nonpositivity(q) == pytest.approx(0.2)


def test_certification_negativity():
    params = certification_params(p=-1.0)
    rho = pure_state(certification_state())
    series = kdq_series(params, rho, to_seconds(params, np.linspace(0, 1.5, 301)))
    assert series.q[:, 0, 1].real.min() < -0.01
    assert series.aleph[0] == pytest.approx(0, abs=1e-12)
    assert series.aleph.max() > 0.05


def test_aleph_peak_grows_with_alignment():
    rho = pure_state(certification_state())
    peaks = []
    for p in (-1.0, -0.75, -0.5, -0.25):
        params = certification_params(p=p)
        peaks.append(kdq_series(params, rho, to_seconds(params, np.linspace(0, 1.5, 301))).aleph.max())
    assert all(a > b for a, b in zip(peaks, peaks[1:]))


def test_energy_change_paths_agree(rng):
    for _ in range(5):
        params = random_params(rng)
        rho = random_pure_state(rng)
        ham = Hamiltonian.from_params(params)
        gen = build_generators(params)
        t = rng.uniform(0, 2) / params.gamma_bar
        de = average_energy_change(kdq(params, rho, t), ham)
        rho_t = apply_channel_hermitian(gen, rho, t)
        trace_path = np.trace(ham.matrix @ (rho_t - rho)).real
        assert abs(de.total.imag) <= 1e-9 * params.omega_a
        assert abs(de.total.real - trace_path) <= 1e-9 * params.omega_a
        assert de.total == pytest.approx(de.diag + de.coh, abs=1e-9 * params.omega_a)


def test_energy_change_zero_time():
    params = certification_params()
    de = average_energy_change(kdq(params, pure_state(certification_state()), 0.0), Hamiltonian.from_params(params))
    assert de.total == 0


@pytest.mark.parametrize("p", [-1.0, -0.75, -0.5, -0.25, 0.5, 1.0])
def test_diag_energy_change_vanishes_for_balanced_preset(p):
    params = certification_params(p=p)
    ham = Hamiltonian.from_params(params)
    rho = pure_state(certification_state())
    for tau in (0.1, 0.4, 1.5):
        de = average_energy_change(kdq(params, rho, tau / GAMMA), ham)
        assert abs(de.diag) <= 1e-6 * params.omega_a


def test_z_sector_does_not_change_q():
    params = certification_params(p=-1.0)
    rho = pure_state(certification_state())
    bumped = rho.copy()
    bumped[0, 2] *= 0.2
    bumped[2, 0] *= 0.2
    bumped[1, 2] = bumped[2, 1] = 0.0
    t = 0.5 / GAMMA
    a, b = kdq(params, rho, t), kdq(params, bumped, t)
    np.testing.assert_allclose(a.q, b.q, atol=1e-15)


phase = st.floats(0, 2 * math.pi, exclude_max=True)


@settings(max_examples=60, deadline=None)
@given(
    weights=st.lists(st.floats(0.01, 1), min_size=3, max_size=3),
    phases=st.lists(phase, min_size=3, max_size=3),
    p=st.floats(-1, 1),
    nbar=st.floats(0, 5),
    tau=st.floats(0, 3),
)
def test_kdq_algebra_property(weights, phases, p, nbar, tau):
    total = sum(weights)
    init = InitialState.from_populations(*(w / total for w in weights), *phases)
    rho = pure_state(init)
    params = SystemParams(GAMMA, 1.3 * GAMMA, 0.2 * GAMMA, 1e9, nbar, p)
    dist = kdq(params, rho, tau / GAMMA)
    assert isinstance(dist, KdqDistribution)
    assert abs(dist.q.sum() - 1) <= 1e-10
    np.testing.assert_allclose(dist.initial_marginal, init.populations, atol=1e-10)
    np.testing.assert_array_equal(dist.q, dist.q_diag + dist.q_coh)
    assert nonpositivity(dist) >= -1e-12
