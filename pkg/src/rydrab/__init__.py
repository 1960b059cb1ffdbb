"""Two-atom Rydberg gates driven by a resonant amplitude-modulated field."""

from .dynamics import (
    IntegratorConfig,
    IntegratorError,
    JumpOperators,
    Trajectory,
    propagate_basis,
    propagate_lindblad,
    propagate_pure,
)
from .metrics import GateTarget, average_fidelity, reference_state
from .model import (
    PulseShape,
    SystemParams,
    effective_hamiltonian,
    final_effective_hamiltonian,
    full_hamiltonian,
    gate_duration_for_phase,
    mhz,
    sector_hamiltonian,
)

__version__ = "0.1.0"

__all__ = [
    "GateTarget",
    "IntegratorConfig",
    "IntegratorError",
    "JumpOperators",
    "PulseShape",
    "SystemParams",
    "Trajectory",
    "average_fidelity",
    "effective_hamiltonian",
    "final_effective_hamiltonian",
    "full_hamiltonian",
    "gate_duration_for_phase",
    "mhz",
    "propagate_basis",
    "propagate_lindblad",
    "propagate_pure",
    "reference_state",
    "sector_hamiltonian",
]
