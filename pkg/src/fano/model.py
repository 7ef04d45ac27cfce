"""Physical parameters, Hamiltonian, initial states and the (x, z) representation.

Basis order is (a, b, c) throughout, with hbar = 1 so energies are in rad/s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
NORM_TOL = 1e-12

# How a dimensionless time tau maps to seconds.  "rate": t = tau / gamma_bar,
# the scale on which the reference figures and efficiency table are reported.
# "cycle": t = 2*pi*tau / gamma_bar, i.e. tau read literally as t*gamma/(2*pi).
TIME_CONVENTIONS = ("rate", "cycle")


class InvalidStateError(ValueError):
    """Raised for unnormalized amplitudes or non-physical density matrices."""


class InvalidParamsError(ValueError):
    """Raised when physical parameters violate their constraints."""


class RepresentationError(ValueError):
    """Raised when an operator cannot be mapped to the (x, z) vectors."""


@dataclass(frozen=True)
class SystemParams:
    """Constants of the V-type system and the incoherent field.

    Rates and frequencies are angular (rad/s).  ``p`` is the cosine of the
    angle between the two transition dipoles.
    """

    gamma_a: float
    gamma_b: float
    delta: float
    d_center: float
    nbar: float
    p: float

    def __post_init__(self):
        for name in ("gamma_a", "gamma_b", "delta", "d_center", "nbar", "p"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParamsError(f"{name} must be finite")
        if self.gamma_a <= 0 or self.gamma_b <= 0:
            raise InvalidParamsError("decay rates must be positive")
        if self.delta < 0:
            raise InvalidParamsError("delta must be >= 0")
        if self.d_center <= 0:
            raise InvalidParamsError("d_center must be positive")
        if self.nbar < 0:
            raise InvalidParamsError("nbar must be >= 0")
        if not -1.0 <= self.p <= 1.0:
            raise InvalidParamsError("p must lie in [-1, 1]")
        if self.omega_b <= 0:
            raise InvalidParamsError("omega_b = d_center - delta/2 must be positive")

    @property
    def omega_a(self) -> float:
        return self.d_center + self.delta / 2

    @property
    def omega_b(self) -> float:
        return self.d_center - self.delta / 2

    # omega_c = 0, so transition frequencies equal the level frequencies
    @property
    def omega_ac(self) -> float:
        return self.omega_a

    @property
    def omega_bc(self) -> float:
        return self.omega_b

    @property
    def rate_a(self) -> float:
        """Incoherent pumping rate R_a = nbar * gamma_a."""
        return self.nbar * self.gamma_a

    @property
    def rate_b(self) -> float:
        return self.nbar * self.gamma_b

    @property
    def gamma_bar(self) -> float:
        return 0.5 * (self.gamma_a + self.gamma_b)

    def replace(self, **changes) -> "SystemParams":
        fields = dict(self.__dict__)
        fields.update(changes)
        return SystemParams(**fields)


def time_scale(params: SystemParams, convention: str = "rate") -> float:
    """Seconds per unit of dimensionless time."""
    if convention == "rate":
        return 1.0 / params.gamma_bar
    if convention == "cycle":
        return 2.0 * math.pi / params.gamma_bar
    raise ValueError(f"unknown time convention {convention!r}; expected one of {TIME_CONVENTIONS}")


def to_seconds(params: SystemParams, tau, convention: str = "rate"):
    return np.asarray(tau, dtype=float) * time_scale(params, convention)


def to_dimless(params: SystemParams, t, convention: str = "rate"):
    return np.asarray(t, dtype=float) / time_scale(params, convention)


@dataclass(frozen=True)
class Hamiltonian:
    """Diagonal Hamiltonian diag(E_a, E_b, E_c) with E_c = 0."""

    e_a: float
    e_b: float
    e_c: float = 0.0

    @classmethod
    def from_params(cls, params: SystemParams) -> "Hamiltonian":
        return cls(params.omega_a, params.omega_b, 0.0)

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.e_a, self.e_b, self.e_c])

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.energies).astype(complex)

    def projector(self, k: int) -> np.ndarray:
        out = np.zeros((3, 3), dtype=complex)
        out[k, k] = 1.0
        return out

    def energy_changes(self) -> np.ndarray:
        """Table of E_j - E_l, rows indexed by the initial level l."""
        e = self.energies
        return e[None, :] - e[:, None]


@dataclass(frozen=True)
class InitialState:
    """Pure state alpha_a e^{i phi_a}|a> + alpha_b e^{i phi_b}|b> + alpha_c e^{i phi_c}|c>."""

    alpha_a: float
    alpha_b: float
    alpha_c: float
    phi_a: float = 0.0
    phi_b: float = 0.0
    phi_c: float = 0.0

    def __post_init__(self):
        amps = (self.alpha_a, self.alpha_b, self.alpha_c)
        if any(not math.isfinite(a) or a < 0 for a in amps):
            raise InvalidStateError("amplitudes must be finite and nonnegative")
        if any(not math.isfinite(f) for f in (self.phi_a, self.phi_b, self.phi_c)):
            raise InvalidStateError("phases must be finite")
        norm = sum(a * a for a in amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"squared amplitudes sum to {norm!r}, not 1")

    @classmethod
    def from_populations(cls, rho_aa, rho_bb, rho_cc, phi_a=0.0, phi_b=0.0, phi_c=0.0):
        pops = (rho_aa, rho_bb, rho_cc)
        if any(x < 0 for x in pops):
            raise InvalidStateError("populations must be nonnegative")
        return cls(*(math.sqrt(x) for x in pops), phi_a, phi_b, phi_c)

    @property
    def populations(self) -> np.ndarray:
        return np.array([self.alpha_a, self.alpha_b, self.alpha_c]) ** 2

    @property
    def ket(self) -> np.ndarray:
        amps = np.array([self.alpha_a, self.alpha_b, self.alpha_c])
        phases = np.array([self.phi_a, self.phi_b, self.phi_c])
        return amps * np.exp(1j * phases)


def pure_state(init: InitialState) -> np.ndarray:
    """Density matrix |psi_0><psi_0| of an initial state."""
    psi = init.ket
    rho = np.outer(psi, psi.conj())
    # exact real diagonal; the products can leave ~1e-33 imaginary residue there
    rho[np.diag_indices(3)] = np.abs(psi) ** 2
    return rho


def check_density(rho, *, trace_tol=TRACE_TOL, psd_tol=PSD_TOL) -> np.ndarray:
    """Validate a 3x3 density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise InvalidStateError(f"expected a 3x3 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise InvalidStateError("density matrix trace differs from 1")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise InvalidStateError("density matrix is not positive semidefinite")
    return rho


def split_diag_coh(rho) -> tuple[np.ndarray, np.ndarray]:
    """Split rho into its diagonal part and its off-diagonal part chi."""
    rho = np.asarray(rho, dtype=complex)
    diag = np.diag(np.diag(rho))
    return diag, rho - diag


def to_xz(op) -> tuple[np.ndarray, np.ndarray]:
    """Map a Hermitian 3x3 operator to the real vectors (x, z).

    x = (rho_aa, rho_bb, rho_cc, Re rho_ab, Im rho_ab)
    z = (Re rho_ac, Im rho_ac, Re rho_bc, Im rho_bc)

    The trace is not required to be 1.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (3, 3):
        raise RepresentationError(f"expected a 3x3 matrix, got shape {op.shape}")
    scale = max(1.0, float(np.max(np.abs(op))))
    if np.max(np.abs(op - op.conj().T)) > HERMITIAN_TOL * scale:
        raise RepresentationError("operator is not Hermitian")
    x = np.array([op[0, 0].real, op[1, 1].real, op[2, 2].real, op[0, 1].real, op[0, 1].imag])
    z = np.array([op[0, 2].real, op[0, 2].imag, op[1, 2].real, op[1, 2].imag])
    return x, z


def from_xz(x, z) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    ab = x[3] + 1j * x[4]
    ac = z[0] + 1j * z[1]
    bc = z[2] + 1j * z[3]
    return np.array(
        [
            [x[0], ab, ac],
            [np.conj(ab), x[1], bc],
            [np.conj(ac), np.conj(bc), x[2]],
        ],
        dtype=complex,
    )
