"""Generators of the master equation and the quantum channel they produce.

The dynamics split into two decoupled linear systems, dx/dt = A x for the
populations and the excited-state coherence rho_ab, and dz/dt = C z for the
optical coherences rho_ac, rho_bc.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .expm import NumericError, expm
from .model import SystemParams, from_xz, to_xz


class NoSteadyStateError(NumericError):
    pass


@dataclass(frozen=True)
class Generators:
    a_matrix: np.ndarray
    c_matrix: np.ndarray

    def __post_init__(self):
        self.a_matrix.setflags(write=False)
        self.c_matrix.setflags(write=False)


def build_generators(params: SystemParams) -> Generators:
    ga, gb, n, p = params.gamma_a, params.gamma_b, params.nbar, params.p
    s = np.sqrt(ga * gb)
    k = 0.5 * (ga + gb) * (n + 1)
    a = np.array(
        [
            [-ga * (n + 1), 0.0, ga * n, -p * s * (n + 1), 0.0],
            [0.0, -gb * (n + 1), gb * n, -p * s * (n + 1), 0.0],
            [ga * (n + 1), gb * (n + 1), -(ga + gb) * n, 2 * p * s * (n + 1), 0.0],
            [-0.5 * p * s * (n + 1), -0.5 * p * s * (n + 1), p * s * n, -k, params.delta],
            [0.0, 0.0, 0.0, -params.delta, -k],
        ]
    )
    ka = n * (ga + gb / 2) + ga / 2
    kb = n * (gb + ga / 2) + gb / 2
    cross = -0.5 * p * s * (n + 1)
    wac, wbc = params.omega_ac, params.omega_bc
    c = np.array(
        [
            [-ka, wac, cross, 0.0],
            [-wac, -ka, 0.0, cross],
            [cross, 0.0, -kb, wbc],
            [0.0, cross, -wbc, -kb],
        ]
    )
    return Generators(a, c)


@dataclass(frozen=True)
class Propagator:
    """exp(A t) and exp(C t) at a single time ``t`` (seconds)."""

    exp_a: np.ndarray
    exp_c: np.ndarray
    t: float

    def __matmul__(self, other: "Propagator") -> "Propagator":
        return Propagator(self.exp_a @ other.exp_a, self.exp_c @ other.exp_c, self.t + other.t)

    def apply_hermitian(self, op) -> np.ndarray:
        x, z = to_xz(op)
        return from_xz(self.exp_a @ x, self.exp_c @ z)

    def apply_general(self, op) -> np.ndarray:
        op = np.asarray(op, dtype=complex)
        h1 = 0.5 * (op + op.conj().T)
        h2 = -0.5j * (op - op.conj().T)
        return self.apply_hermitian(h1) + 1j * self.apply_hermitian(h2)


def propagator(gen: Generators, t: float) -> Propagator:
    if t < 0:
        raise ValueError("time must be nonnegative")
    return Propagator(expm(gen.a_matrix, t), expm(gen.c_matrix, t), float(t))


def apply_channel_hermitian(gen: Generators, op, t: float) -> np.ndarray:
    return propagator(gen, t).apply_hermitian(op)


def apply_channel_general(gen: Generators, op, t: float) -> np.ndarray:
    """Apply the channel to any 3x3 operator by complex-linear extension.

    ``op`` is split into Hermitian parts H1 + i H2 and each part is
    propagated through the (x, z) equations.
    """
    return propagator(gen, t).apply_general(op)


def x_propagators(gen: Generators, times) -> np.ndarray:
    """Stack of exp(A t) for every t in ``times``; shape (len(times), 5, 5)."""
    return np.stack([expm(gen.a_matrix, float(t)) for t in np.asarray(times, dtype=float)])


def steady_state(gen: Generators, x0=None, *, rtol: float = 1e-10) -> np.ndarray:
    """Stationary x-vector: the t -> infinity limit of exp(A t) x0.

    For a one-dimensional null space the result does not depend on ``x0`` and
    is normalized to unit population.  With a degenerate null space the
    spectral projector onto the zero eigenvalue is applied to ``x0``.
    """
    a = np.asarray(gen.a_matrix)
    scale = np.linalg.norm(a, 2)
    right = scipy.linalg.null_space(a, rcond=rtol)
    if right.shape[1] == 0:
        raise NoSteadyStateError("generator has no numerically zero eigenvalue")

    if right.shape[1] == 1:
        v = right[:, 0]
        v = v / v[:3].sum()
        residual = np.linalg.norm(a @ v)
        if residual > rtol * scale:
            raise NoSteadyStateError(f"steady-state residual {residual:.3e} too large")
        return v

    if x0 is None:
        raise ValueError("degenerate steady state: an initial x-vector is required")
    left = scipy.linalg.null_space(a.T, rcond=rtol)
    if left.shape[1] != right.shape[1]:
        raise NoSteadyStateError("zero eigenvalue is not semisimple")
    proj = right @ np.linalg.solve(left.T @ right, left.T)
    return proj @ np.asarray(x0, dtype=float)


def superoperator(params: SystemParams) -> np.ndarray:
    """9x9 complex generator acting on row-major vec(rho).

    Built entry by entry from the equations of motion, with Re rho_ab
    replaced by (rho_ab + rho_ba)/2 so the map is complex-linear on all
    3x3 operators.  The optical-coherence rotation uses the same frequencies
    as the C matrix.  This is an independent route to the channel used for
    cross-checking ``apply_channel_general``.
    """
    ga, gb, n, p = params.gamma_a, params.gamma_b, params.nbar, params.p
    s = np.sqrt(ga * gb)
    k = 0.5 * (ga + gb) * (n + 1)
    ka = n * (ga + gb / 2) + ga / 2
    kb = n * (gb + ga / 2) + gb / 2

    def idx(r, c):
        return 3 * r + c

    aa, ab, ac = idx(0, 0), idx(0, 1), idx(0, 2)
    ba, bb, bc = idx(1, 0), idx(1, 1), idx(1, 2)
    ca, cb, cc = idx(2, 0), idx(2, 1), idx(2, 2)
    lv = np.zeros((9, 9), dtype=complex)

    interference = p * s * (n + 1)
    lv[aa, aa] = -ga * (n + 1)
    lv[aa, cc] = ga * n
    lv[aa, ab] = lv[aa, ba] = -0.5 * interference
    lv[bb, bb] = -gb * (n + 1)
    lv[bb, cc] = gb * n
    lv[bb, ab] = lv[bb, ba] = -0.5 * interference
    lv[cc, aa] = ga * (n + 1)
    lv[cc, bb] = gb * (n + 1)
    lv[cc, cc] = -(ga + gb) * n
    lv[cc, ab] = lv[cc, ba] = interference

    for row, sign in ((ab, -1j), (ba, 1j)):
        lv[row, aa] = lv[row, bb] = -0.5 * interference
        lv[row, cc] = p * s * n
        lv[row, row] = -k + sign * params.delta

    cross = -0.5 * interference
    lv[ac, ac] = -ka - 1j * params.omega_ac
    lv[ac, bc] = cross
    lv[bc, bc] = -kb - 1j * params.omega_bc
    lv[bc, ac] = cross
    lv[ca, ca] = -ka + 1j * params.omega_ac
    lv[ca, cb] = cross
    lv[cb, cb] = -kb + 1j * params.omega_bc
    lv[cb, ca] = cross
    return lv
