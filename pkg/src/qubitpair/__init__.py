"""Dissipative dynamics, quantum correlations and specific heat of an
exchange-coupled qubit pair in independent Lorentzian baths."""

from .model import (
    ModelParams,
    XState,
    hamiltonian,
    hamiltonian_eigensystem,
    spectral_density,
    memory_kernel,
    decoherence_integral,
    partition_function,
    log_partition_function,
    thermal_state,
    kbt_to_beta,
)
from .propagator import (
    PropagatorBlocks,
    closed_form_propagators,
    evolve_closed_form,
    evolve_ode_oracle,
    xstate_eigenvalues,
)
from .correlations import (
    DiscordBreakdown,
    MeasurementParams,
    von_neumann_entropy,
    reduced_state,
    concurrence_general,
    concurrence_xstate,
    entanglement_of_formation,
    mutual_information,
    conditional_entropy_measured,
    classical_correlation,
    quantum_discord,
    discord_xstate,
)
from .thermo import HeatPoint, log_eigenvalue_sum, specific_heat_normalized, heat_surface

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "XState",
    "hamiltonian",
    "hamiltonian_eigensystem",
    "spectral_density",
    "memory_kernel",
    "decoherence_integral",
    "partition_function",
    "log_partition_function",
    "thermal_state",
    "kbt_to_beta",
    "PropagatorBlocks",
    "closed_form_propagators",
    "evolve_closed_form",
    "evolve_ode_oracle",
    "xstate_eigenvalues",
    "DiscordBreakdown",
    "MeasurementParams",
    "von_neumann_entropy",
    "reduced_state",
    "concurrence_general",
    "concurrence_xstate",
    "entanglement_of_formation",
    "mutual_information",
    "conditional_entropy_measured",
    "classical_correlation",
    "quantum_discord",
    "discord_xstate",
    "HeatPoint",
    "log_eigenvalue_sum",
    "specific_heat_normalized",
    "heat_surface",
    "__version__",
]
