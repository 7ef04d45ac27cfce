"""V-type three-level system under incoherent pumping: dynamics, Kirkwood-Dirac
quasiprobabilities of energy changes, extractable work and efficiency."""

from .energetics import (
    efficiency,
    find_diag_balance,
    phase_sweep,
    population_sweep,
    work_trajectory,
)
from .expm import NumericError, expm
from .kdq import KdqDistribution, average_energy_change, kdq, kdq_series, nonpositivity, tpm
from .liouville import (
    Generators,
    Propagator,
    apply_channel_general,
    apply_channel_hermitian,
    build_generators,
    propagator,
    steady_state,
)
from .model import (
    Hamiltonian,
    InitialState,
    SystemParams,
    from_xz,
    pure_state,
    split_diag_coh,
    to_xz,
)

__version__ = "0.1.0"
