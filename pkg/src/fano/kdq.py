"""Kirkwood-Dirac quasiprobabilities of two-time energy changes.

The first energy measurement is at t = 0 (state preparation) and the second
after the channel has acted for a time t, so

    q[l, j] = Tr[ Pi_j  Phi_t[ Pi_l rho0 ] ].

Rows index the initial level l, columns the final level j, both in the
order (a, b, c).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .liouville import Generators, Propagator, build_generators, propagator, x_propagators
from .model import Hamiltonian, SystemParams, split_diag_coh, to_xz


@dataclass(frozen=True)
class KdqDistribution:
    q: np.ndarray
    q_diag: np.ndarray
    q_coh: np.ndarray
    t: float

    @property
    def initial_marginal(self) -> np.ndarray:
        """Row sums; equal to the populations of rho0."""
        return self.q.sum(axis=1)

    @property
    def final_marginal(self) -> np.ndarray:
        """Column sums; equal to the populations of rho(t)."""
        return self.q.sum(axis=0)


class EnergyChange(NamedTuple):
    total: complex
    diag: complex
    coh: complex


def _table(prop: Propagator, rho0) -> np.ndarray:
    rho0 = np.asarray(rho0, dtype=complex)
    q = np.empty((3, 3), dtype=complex)
    for l in range(3):
        proj = np.zeros((3, 3), dtype=complex)
        proj[l, l] = 1.0
        q[l] = np.diag(prop.apply_general(proj @ rho0))
    return q


def kdq_from_propagator(prop: Propagator, rho0) -> KdqDistribution:
    diag, coh = split_diag_coh(rho0)
    q_diag = _table(prop, diag)
    q_coh = _table(prop, coh)
    # q is assembled from the parts so that q == q_diag + q_coh holds exactly
    return KdqDistribution(q_diag + q_coh, q_diag, q_coh, prop.t)


def kdq(params: SystemParams, rho0, t: float, *, gen: Generators | None = None) -> KdqDistribution:
    """KDQ distribution at elapsed time ``t`` (seconds)."""
    gen = gen if gen is not None else build_generators(params)
    return kdq_from_propagator(propagator(gen, t), rho0)


def tpm(params: SystemParams, rho0, t: float, *, gen: Generators | None = None) -> np.ndarray:
    """Two-point-measurement joint probabilities p[l, j] = rho0_ll <j|Phi_t[|l><l|]|j>."""
    gen = gen if gen is not None else build_generators(params)
    prop = propagator(gen, t)
    pops = np.real(np.diag(np.asarray(rho0, dtype=complex)))
    out = np.empty((3, 3))
    for l in range(3):
        proj = np.zeros((3, 3), dtype=complex)
        proj[l, l] = 1.0
        out[l] = pops[l] * np.real(np.diag(prop.apply_hermitian(proj)))
    return out


def nonpositivity(dist: KdqDistribution | np.ndarray) -> float:
    """Non-positivity functional -1 + sum |q|; zero for a classical distribution."""
    q = dist.q if isinstance(dist, KdqDistribution) else np.asarray(dist)
    return float(np.abs(q).sum() - 1.0)


def average_energy_change(dist: KdqDistribution, ham: Hamiltonian) -> EnergyChange:
    """<Delta E> = sum q[l, j] (E_j - E_l), with its diag/coh split.

    Values are complex; a nonzero imaginary part is reported, not dropped.
    """
    de = ham.energy_changes()
    return EnergyChange(
        complex(np.sum(dist.q * de)),
        complex(np.sum(dist.q_diag * de)),
        complex(np.sum(dist.q_coh * de)),
    )


def _x_parts(op) -> tuple[np.ndarray, np.ndarray]:
    op = np.asarray(op, dtype=complex)
    h1 = 0.5 * (op + op.conj().T)
    h2 = -0.5j * (op - op.conj().T)
    return to_xz(h1)[0], to_xz(h2)[0]


def _series_tables(props: np.ndarray, rho0) -> np.ndarray:
    out = np.empty((len(props), 3, 3), dtype=complex)
    for l in range(3):
        proj = np.zeros((3, 3), dtype=complex)
        proj[l, l] = 1.0
        x1, x2 = _x_parts(proj @ np.asarray(rho0, dtype=complex))
        out[:, l, :] = (props @ x1)[:, :3] + 1j * (props @ x2)[:, :3]
    return out


class KdqSeries(NamedTuple):
    times: np.ndarray
    q: np.ndarray
    q_diag: np.ndarray
    q_coh: np.ndarray

    def at(self, k: int) -> KdqDistribution:
        return KdqDistribution(self.q[k], self.q_diag[k], self.q_coh[k], float(self.times[k]))

    @property
    def aleph(self) -> np.ndarray:
        return np.abs(self.q).sum(axis=(1, 2)) - 1.0


def kdq_series(params: SystemParams, rho0, times, *, gen: Generators | None = None) -> KdqSeries:
    """KDQ tables on a time grid (seconds); arrays have shape (len(times), 3, 3).

    Only the populations of the propagated operators enter q, and those are
    carried by the x-sector alone, so the z-sector is not propagated here.
    """
    gen = gen if gen is not None else build_generators(params)
    times = np.asarray(times, dtype=float)
    props = x_propagators(gen, times)
    diag, coh = split_diag_coh(rho0)
    q_diag = _series_tables(props, diag)
    q_coh = _series_tables(props, coh)
    return KdqSeries(times, q_diag + q_coh, q_diag, q_coh)
