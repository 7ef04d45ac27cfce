"""Extractable work, efficiency, the diagonal balance condition and sweeps.

Energies are reported in units of omega_a.  Times are passed as
dimensionless values ``tau``; see :func:`fano.model.to_seconds` for the
time convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .kdq import kdq_series
from .liouville import Generators, build_generators, x_propagators
from .model import (
    Hamiltonian,
    InitialState,
    SystemParams,
    pure_state,
    split_diag_coh,
    to_seconds,
    to_xz,
)

DEFAULT_T_MAX = 1.5
DEFAULT_N_TIMES = 1501
DEFAULT_PHASE_POINTS = 64
DEFAULT_POPULATION_POINTS = 61


class UndefinedEfficiencyError(ArithmeticError):
    pass


class NoBalanceError(ArithmeticError):
    pass


def default_tau_grid(t_max: float = DEFAULT_T_MAX, n: int = DEFAULT_N_TIMES) -> np.ndarray:
    if n < 1:
        raise ValueError("a time grid needs at least one point")
    if n == 1:
        return np.zeros(1)
    return np.linspace(0.0, t_max, n)


@dataclass(frozen=True)
class WorkTrajectory:
    tau: np.ndarray
    times: np.ndarray
    w_total: np.ndarray
    w_diag: np.ndarray
    w_coh: np.ndarray
    # largest |Im <Delta E>| / omega_a seen on the grid
    imag_residual: float


@dataclass(frozen=True)
class EfficiencyReport:
    tau: np.ndarray
    eta: np.ndarray
    eta_max: float
    t_tilde: float


@dataclass(frozen=True)
class SweepGrid:
    axis1_name: str
    axis1: np.ndarray
    axis2_name: str
    axis2: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.axis1), len(self.axis2)):
            raise ValueError("sweep values do not match the axes")
        if not np.all(np.isfinite(self.values)):
            raise ArithmeticError("sweep produced non-finite values")


@dataclass(frozen=True)
class Balance:
    nbar: float
    rho_cc: float
    residual: float


def work_trajectory(params: SystemParams, rho0, tau, *, convention: str = "rate") -> WorkTrajectory:
    """Extractable work -<Delta E>/omega_a on a time grid, split by diag/coh parts of rho0."""
    tau = np.asarray(tau, dtype=float)
    times = to_seconds(params, tau, convention)
    series = kdq_series(params, rho0, times)
    de = Hamiltonian.from_params(params).energy_changes()
    total = np.einsum("tlj,lj->t", series.q, de)
    diag = np.einsum("tlj,lj->t", series.q_diag, de)
    coh = np.einsum("tlj,lj->t", series.q_coh, de)
    wa = params.omega_a
    return WorkTrajectory(
        tau=tau,
        times=times,
        w_total=-total.real / wa,
        w_diag=-diag.real / wa,
        w_coh=-coh.real / wa,
        imag_residual=float(np.max(np.abs(total.imag))) / wa if len(tau) else 0.0,
    )


def efficiency_from_work(params: SystemParams, traj: WorkTrajectory) -> EfficiencyReport:
    if params.nbar <= 0:
        raise UndefinedEfficiencyError("efficiency needs a pumping field with nbar > 0")
    eta = traj.w_total * params.omega_a / (params.nbar * params.omega_ac)
    eta_max = float(np.max(eta))
    first = int(np.flatnonzero(eta >= eta_max - 1e-12)[0])
    return EfficiencyReport(traj.tau, eta, eta_max, float(traj.tau[first]))


def efficiency(params: SystemParams, rho0, tau, *, convention: str = "rate") -> EfficiencyReport:
    """eta(t) = -<Delta E(t)> / (nbar * omega_ac), its grid maximum and first peak time."""
    if params.nbar <= 0:
        raise UndefinedEfficiencyError("efficiency needs a pumping field with nbar > 0")
    return efficiency_from_work(params, work_trajectory(params, rho0, tau, convention=convention))


def _energy_rows(params: SystemParams, gen: Generators, times) -> np.ndarray:
    """Rows r(t) with <Delta E>(t)/omega_a = r(t) . x0 for a Hermitian initial operator.

    This is the trace formula Tr[H (rho(t) - rho(0))], independent of the
    quasiprobability sum.
    """
    c = np.array([params.omega_a, params.omega_b, 0.0, 0.0, 0.0]) / params.omega_a
    props = x_propagators(gen, times)
    return np.einsum("i,tij->tj", c, props) - c


def signed_extremum(values, axis: int = 0) -> np.ndarray:
    """Entry of largest magnitude along ``axis``, keeping its sign (first on ties)."""
    values = np.asarray(values)
    idx = np.argmax(np.abs(values), axis=axis)
    return np.take_along_axis(values, np.expand_dims(idx, axis), axis=axis).squeeze(axis)


def _diag_state(rho_cc: float) -> np.ndarray:
    excited = 0.5 * (1.0 - rho_cc)
    return np.diag([excited, excited, rho_cc]).astype(complex)


def find_diag_balance(
    params: SystemParams,
    tau=None,
    *,
    convention: str = "rate",
    tol: float = 1e-6,
) -> Balance:
    """Ground population rho_cc(0) at which <Delta E>_diag vanishes.

    The excited populations are kept equal, rho_aa = rho_bb = (1 - rho_cc)/2.
    The root of the late-time value is bracketed on [0, 1]; the result must
    also keep |<Delta E>_diag| <= tol * omega_a at every grid time.
    """
    if params.nbar <= 0:
        raise NoBalanceError("no balance without pumping (nbar must be > 0)")
    tau = default_tau_grid() if tau is None else np.asarray(tau, dtype=float)
    gen = build_generators(params)
    rows = _energy_rows(params, gen, to_seconds(params, tau, convention))
    late = rows[-1]

    def plateau(rho_cc):
        return float(late @ to_xz(_diag_state(rho_cc))[0])

    lo, hi = plateau(0.0), plateau(1.0)
    if lo == 0.0:
        root = 0.0
    elif hi == 0.0:
        root = 1.0
    elif np.sign(lo) == np.sign(hi):
        raise NoBalanceError("late-time <Delta E>_diag does not change sign over rho_cc in [0, 1]")
    else:
        root = brentq(plateau, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)

    residual = float(np.max(np.abs(rows @ to_xz(_diag_state(root))[0])))
    if residual > tol:
        raise NoBalanceError(f"<Delta E>_diag reaches {residual:.3e} omega_a at the balance point")
    return Balance(params.nbar, root, residual)


def _coh_x(states) -> np.ndarray:
    return np.stack([to_xz(split_diag_coh(pure_state(s))[1])[0] for s in states])


def _coh_extrema(params, states, tau, convention) -> np.ndarray:
    gen = build_generators(params)
    rows = _energy_rows(params, gen, to_seconds(params, tau, convention))
    series = rows @ _coh_x(states).T  # (times, cells)
    return signed_extremum(series, axis=0)


PHASE_NAMES = {"a": "phi_a", "b": "phi_b", "c": "phi_c"}


def phase_grid(n: int = DEFAULT_PHASE_POINTS) -> np.ndarray:
    """n equally spaced phases k*2pi/n; contains pi/2 and pi when 4 divides n."""
    return 2.0 * np.pi * np.arange(n) / n


def phase_sweep(
    params: SystemParams,
    populations,
    fixed: str = "a",
    n: int = DEFAULT_PHASE_POINTS,
    tau=None,
    *,
    convention: str = "rate",
) -> SweepGrid:
    """Signed extremum over time of <Delta E>_coh/omega_a on a grid of two phases.

    The phase named by ``fixed`` is held at zero and the other two (in a, b,
    c order) are swept over [0, 2pi).
    """
    if fixed not in PHASE_NAMES:
        raise ValueError(f"fixed phase must be one of {sorted(PHASE_NAMES)}")
    tau = default_tau_grid() if tau is None else np.asarray(tau, dtype=float)
    pops = np.asarray(populations, dtype=float)
    free = [k for k in "abc" if k != fixed]
    phases = phase_grid(n)
    states = []
    for f1 in phases:
        for f2 in phases:
            ph = {"a": 0.0, "b": 0.0, "c": 0.0, free[0]: f1, free[1]: f2}
            states.append(InitialState.from_populations(*pops, ph["a"], ph["b"], ph["c"]))
    values = _coh_extrema(params, states, tau, convention).reshape(n, n)
    return SweepGrid(PHASE_NAMES[free[0]], phases, PHASE_NAMES[free[1]], phases.copy(), values)


def population_sweep(
    params: SystemParams,
    rho_cc: float,
    phi_b_values,
    n: int = DEFAULT_POPULATION_POINTS,
    tau=None,
    *,
    convention: str = "rate",
) -> SweepGrid:
    """Signed extremum over time of <Delta E>_coh/omega_a versus rho_aa(0).

    rho_bb(0) = 1 - rho_cc - rho_aa(0); phases are (0, phi_b, 0).  One row per
    entry of ``phi_b_values``.
    """
    if not 0.0 <= rho_cc <= 1.0:
        raise ValueError("rho_cc must lie in [0, 1]")
    tau = default_tau_grid() if tau is None else np.asarray(tau, dtype=float)
    excited = 1.0 - rho_cc
    rho_aa = np.linspace(0.0, excited, n)
    phi_b = np.asarray(phi_b_values, dtype=float)
    states = []
    for fb in phi_b:
        for ra in rho_aa:
            amps = (math.sqrt(ra), math.sqrt(max(excited - ra, 0.0)), math.sqrt(rho_cc))
            states.append(InitialState(*amps, 0.0, float(fb), 0.0))
    values = _coh_extrema(params, states, tau, convention).reshape(len(phi_b), n)
    return SweepGrid("phi_b", phi_b, "rho_aa", rho_aa, values)
