"""Hamiltonians of the resonator-transmon-resonator circuit, in rad/s (H / hbar).

Sign convention
---------------
Only the gauge-invariant sign of the product ``g1 * g2 * kappa`` matters for
the dynamics. Two conventions are supported:

``"flipped"`` (default)
    The qubit exchange with R2 enters with the sign flipped relative to R1,
    so the resonator-resonator coupling with the qubit in |g> is
    ``kappa + g1 g2 / Delta``. This is the convention under which a qubit
    parked below the resonators produces a ground-state idling point.
``"circuit"``
    Every exchange term carries the sign obtained from the capacitance
    matrix, so the ground-state coupling is ``kappa - g1 g2 / Delta``. With
    the qubit below the resonators it never vanishes; the idling point then
    belongs to the qubit-excited sector.
"""
from __future__ import annotations

import numpy as np

from .fock import HilbertSpace
from .params import SI, CircuitParams, PhysicalConstants, derive, DerivedParams

__all__ = [
    "CONVENTIONS",
    "mediated_sign",
    "full_rwa",
    "full_transmon",
    "hamiltonian_at_flux",
]

CONVENTIONS = {"flipped": -1.0, "circuit": 1.0}


def mediated_sign(convention: str) -> float:
    """Sign applied to the qubit-R2 exchange amplitude."""
    try:
        return CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown sign convention {convention!r}; "
                         f"expected one of {sorted(CONVENTIONS)}") from None


def full_rwa(space: HilbertSpace, dp: DerivedParams, convention: str = "flipped") -> np.ndarray:
    """Excitation-conserving two-level Hamiltonian.

    ``w_q (s+ s- + 1/2) + sum_k w_Rk (ak^dag ak + 1/2)
    + sum_k g_k (ak^dag s- + ak s+) + kappa (a1^dag a2 + a1 a2^dag)``
    """
    if space.qubit_levels != 2:
        raise ValueError("full_rwa requires a two-level qubit (qubit_levels=2)")
    a1, s, a2 = (space.annihilator(k) for k in ("R1", "Q", "R2"))
    one = space.identity()
    g2 = mediated_sign(convention) * dp.g2
    h = dp.omega_q * (s.conj().T @ s + one / 2)
    h = h + dp.omega_R1 * (a1.conj().T @ a1 + one / 2) + dp.omega_R2 * (a2.conj().T @ a2 + one / 2)
    h = h + dp.g1 * (a1.conj().T @ s + a1 @ s.conj().T) + g2 * (a2.conj().T @ s + a2 @ s.conj().T)
    h = h + dp.kappa * (a1.conj().T @ a2 + a1 @ a2.conj().T)
    return h


def full_transmon(space: HilbertSpace, dp: DerivedParams, ec: float | None = None,
                  convention: str = "flipped") -> np.ndarray:
    """Quartic transmon Hamiltonian with counter-rotating couplings.

    ``w_q (b^dag b + 1/2) - (E_C / 2 hbar) b^dag b^dag b b + sum_k w_Rk (...)
    + sum_k g_k (b - b^dag)(ak^dag - ak) - kappa (a1^dag - a1)(a2^dag - a2)``

    ``ec`` is the charging energy in joules and defaults to ``dp.E_C``.
    """
    ec = dp.E_C if ec is None else ec
    hbar = dp.constants.reduced_planck
    a1, b, a2 = (space.annihilator(k) for k in ("R1", "Q", "R2"))
    a1d, bd, a2d = a1.conj().T, b.conj().T, a2.conj().T
    one = space.identity()
    g2 = mediated_sign(convention) * dp.g2
    h = dp.omega_q * (bd @ b + one / 2) - (ec / (2 * hbar)) * (bd @ bd @ b @ b)
    h = h + dp.omega_R1 * (a1d @ a1 + one / 2) + dp.omega_R2 * (a2d @ a2 + one / 2)
    h = h + dp.g1 * (b - bd) @ (a1d - a1) + g2 * (b - bd) @ (a2d - a2)
    h = h - dp.kappa * (a1d - a1) @ (a2d - a2)
    return h


def hamiltonian_at_flux(space: HilbertSpace, cp: CircuitParams, phi_over_phi0: float,
                        variant: str = "rwa", convention: str = "flipped",
                        kappa_override: float | None = None,
                        constants: PhysicalConstants = SI) -> np.ndarray:
    """Hamiltonian with the external flux as the only knob.

    ``variant`` is ``"rwa"`` or ``"transmon"``. Raises ``ValueError`` where
    the qubit frequency is undefined.
    """
    dp = derive(cp.at_flux(phi_over_phi0, constants), constants)
    if kappa_override is not None:
        dp = dp.with_kappa(kappa_override)
    if variant == "rwa":
        return full_rwa(space, dp, convention)
    if variant == "transmon":
        return full_transmon(space, dp, convention=convention)
    raise ValueError(f"unknown variant {variant!r}; expected 'rwa' or 'transmon'")
