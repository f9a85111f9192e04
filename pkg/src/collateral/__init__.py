"""Collateral resonator-resonator coupling through a transmon.

Circuit parameters, Hamiltonians, exact dynamics, the idling point and the
NOON-state protocol for two microwave resonators sharing a qubit.
"""
__version__ = "0.1.0"

from .params import (SI, CircuitParams, DerivedParams, PhysicalConstants, capacitance_matrix,
                     collateral_with_parasitic, derive, josephson_energy, nominal_params)
from .fock import HilbertSpace
from .hamiltonians import full_rwa, full_transmon, hamiltonian_at_flux
from .evolve import TraceGrid, population_trace, propagate, sweep_flux
from .effective import EffectiveParams, effective_hamiltonian, effective_params
from .idling import (NoIdlingPoint, effective_coupling_curve, idling_flux_closed_form,
                     idling_flux_numeric)
from .noon import ProtocolResult, ProtocolStep, fidelity_scan, run_protocol
from .optical import CavityParams, g_over_kappa_c, kappa_c

__all__ = [
    "SI", "CircuitParams", "DerivedParams", "PhysicalConstants", "capacitance_matrix",
    "collateral_with_parasitic", "derive", "josephson_energy", "nominal_params",
    "HilbertSpace", "full_rwa", "full_transmon", "hamiltonian_at_flux",
    "TraceGrid", "population_trace", "propagate", "sweep_flux",
    "EffectiveParams", "effective_hamiltonian", "effective_params",
    "NoIdlingPoint", "effective_coupling_curve", "idling_flux_closed_form", "idling_flux_numeric",
    "ProtocolResult", "ProtocolStep", "fidelity_scan", "run_protocol",
    "CavityParams", "g_over_kappa_c", "kappa_c",
]
