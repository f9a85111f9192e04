"""Dispersive effective Hamiltonian and the qubit-state-dependent coupling.

Second-order elimination of the qubit gives, for degenerate resonators,

    H_eff = sum_n eta_n a_n^dag a_n + g_eff(q) (a1 a2^dag + a1^dag a2)

with ``eta_n = g_n^2 / Delta``. Which qubit state sees ``kappa + g1 g2/Delta``
and which sees ``kappa - g1 g2/Delta`` depends on the sign convention of the
full Hamiltonian (see :mod:`collateral.hamiltonians`); the mapping below was
fixed by comparing both candidates with the full dynamics.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hamiltonians import mediated_sign
from .params import DerivedParams

__all__ = [
    "DispersiveWarning",
    "EffectiveParams",
    "candidate_couplings",
    "effective_params",
    "effective_hamiltonian",
    "two_mode_space",
]


class DispersiveWarning(UserWarning):
    """|Delta| is not large compared to the qubit-resonator couplings."""


@dataclass(frozen=True)
class EffectiveParams:
    eta1: float
    eta2: float
    g_eff_ground: float
    g_eff_excited: float
    detuning: float

    def coupling(self, qubit_state: str) -> float:
        if qubit_state in ("g", 0):
            return self.g_eff_ground
        if qubit_state in ("e", 1):
            return self.g_eff_excited
        raise ValueError(f"qubit_state must be 'g' or 'e', got {qubit_state!r}")


def candidate_couplings(dp: DerivedParams) -> tuple[float, float]:
    """The two readings ``kappa + g1 g2 / Delta`` and ``kappa - g1 g2 / Delta``."""
    delta = dp.detuning
    if delta == 0:
        raise ValueError("dispersive regime undefined on resonance")
    mediated = dp.g1 * dp.g2 / delta
    return dp.kappa + mediated, dp.kappa - mediated


def effective_params(dp: DerivedParams, convention: str = "flipped",
                     threshold: float = 10.0) -> EffectiveParams:
    """Dispersive shifts and state-resolved couplings.

    Emits `DispersiveWarning` when ``|Delta| < threshold * max|g_k|``.
    """
    delta = dp.detuning
    if delta == 0:
        raise ValueError("dispersive regime undefined on resonance")
    if abs(delta) < threshold * max(abs(dp.g1), abs(dp.g2)):
        warnings.warn(f"|Delta| < {threshold} max|g|: dispersive approximation is poor",
                      DispersiveWarning, stacklevel=2)
    # product of the exchange amplitudes as they appear in the Hamiltonian
    g1g2 = mediated_sign(convention) * dp.g1 * dp.g2
    return EffectiveParams(
        eta1=dp.g1**2 / delta,
        eta2=dp.g2**2 / delta,
        g_eff_ground=dp.kappa - g1g2 / delta,
        g_eff_excited=dp.kappa + g1g2 / delta,
        detuning=delta,
    )


def two_mode_space(n_max: int):
    """Annihilators (a1, a2) on the two-resonator space, order (R1, R2)."""
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)
    one = np.eye(n_max + 1)
    return np.kron(a, one), np.kron(one, a)


def effective_hamiltonian(n_max: int, ep: EffectiveParams, qubit_state: str = "g") -> np.ndarray:
    """H_eff / hbar on the two-resonator space with the qubit frozen in one state.

    Basis index of ``|n1, n2>`` is ``n1 * (n_max + 1) + n2``.
    """
    a1, a2 = two_mode_space(n_max)
    g = ep.coupling(qubit_state)
    return (ep.eta1 * a1.conj().T @ a1 + ep.eta2 * a2.conj().T @ a2
            + g * (a1 @ a2.conj().T + a1.conj().T @ a2))
