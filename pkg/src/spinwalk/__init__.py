"""Wave-packet dynamics of a particle whose velocity sign follows its spin.

The Hamiltonian is H = omega J_y + v p J_z (hbar = 1); everything depends on
the single number alpha = sigma omega / v.
"""

__version__ = "0.1.0"

from .errors import DomainError, DriftOutOfBoxError, GridResolutionError, NumericalFailure, SpinwalkError
from .model import (
    PhysicalParams,
    SpinState,
    canonical_spin_state,
    gaussian_packet_momentum,
    make_params,
    mixing,
    params_from_alpha,
    spin_state,
)

__all__ = [
    "DomainError",
    "DriftOutOfBoxError",
    "GridResolutionError",
    "NumericalFailure",
    "SpinwalkError",
    "PhysicalParams",
    "SpinState",
    "canonical_spin_state",
    "gaussian_packet_momentum",
    "make_params",
    "mixing",
    "params_from_alpha",
    "spin_state",
]
