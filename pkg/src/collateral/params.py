"""Circuit parameters and the physical quantities derived from them.

Everything here is strict SI: farad, henry, joule, weber, radian/second.
Display conversions (GHz, MHz, fF, nH) live in the CLI layer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants as _sc

__all__ = [
    "PhysicalConstants",
    "SI",
    "CircuitParams",
    "DerivedParams",
    "josephson_energy",
    "derive",
    "capacitance_matrix",
    "approximate_inverse_capacitance",
    "collateral_with_parasitic",
    "validity_flags",
    "nominal_params",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Constants used by the circuit formulas.

    The flux quantum is the reduced one, hbar / 2e, so that the Josephson
    phase is ``phi / flux_quantum``.
    """

    elementary_charge: float = _sc.e
    reduced_planck: float = _sc.hbar
    vacuum_permittivity: float = _sc.epsilon_0
    light_speed: float = _sc.c
    electron_mass: float = _sc.m_e

    def __post_init__(self):
        for name in ("elementary_charge", "reduced_planck", "vacuum_permittivity",
                     "light_speed", "electron_mass"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def flux_quantum(self) -> float:
        return self.reduced_planck / (2.0 * self.elementary_charge)


SI = PhysicalConstants()


@dataclass(frozen=True)
class CircuitParams:
    """Raw electrical elements of the resonator-transmon-resonator circuit.

    Parameters
    ----------
    C_T : float
        Total qubit box capacitance C_J + C_B (F).
    C_q1, C_q2 : float
        Qubit-resonator coupling capacitances (F).
    C_R1, C_R2 : float
        Resonator capacitances (F).
    L_R1, L_R2 : float
        Resonator inductances (H).
    E_J1, E_J2 : float
        Josephson energies of the two SQUID junctions (J).
    C_R1R2 : float
        Direct parasitic resonator-resonator capacitance (F), default 0.
    phi_ext : float
        External flux through the SQUID loop (Wb).
    """

    C_T: float
    C_q1: float
    C_q2: float
    C_R1: float
    C_R2: float
    L_R1: float
    L_R2: float
    E_J1: float
    E_J2: float
    C_R1R2: float = 0.0
    phi_ext: float = 0.0

    def __post_init__(self):
        for name in ("C_T", "C_R1", "C_R2", "L_R1", "L_R2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)!r}")
        # zero coupling capacitance is the decoupled limit, still a valid circuit
        for name in ("C_q1", "C_q2", "C_R1R2", "E_J1", "E_J2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)!r}")
        if not all(math.isfinite(getattr(self, f)) for f in self.__dataclass_fields__):
            raise ValueError("circuit parameters must be finite")

    @property
    def d_asym(self) -> float:
        total = self.E_J1 + self.E_J2
        if total == 0:
            return 0.0
        return (self.E_J1 - self.E_J2) / total

    def flux_over_phi0(self, constants: PhysicalConstants = SI) -> float:
        return self.phi_ext / constants.flux_quantum

    def at_flux(self, phi_over_phi0: float, constants: PhysicalConstants = SI) -> "CircuitParams":
        """Copy with the external flux set to ``phi_over_phi0`` flux quanta."""
        return replace(self, phi_ext=float(phi_over_phi0) * constants.flux_quantum)

    def with_coupling_ratio(self, ratio: float) -> "CircuitParams":
        """Copy with C_qk = ratio * C_Rk for both resonators."""
        return replace(self, C_q1=ratio * self.C_R1, C_q2=ratio * self.C_R2)


@dataclass(frozen=True)
class DerivedParams:
    """Frequencies, energies and couplings computed from a `CircuitParams`.

    Angular frequencies (rad/s) throughout. ``g1``/``g2`` carry the negative
    sign of the charge-coupling formula; ``kappa`` is the collateral
    resonator-resonator coupling.
    """

    E_C: float
    E_J_eff: float
    omega_q: float
    omega_R1: float
    omega_R2: float
    g1: float
    g2: float
    kappa: float
    eps_R1: float
    eps_R2: float
    constants: PhysicalConstants = field(default=SI, repr=False, compare=False)

    @property
    def detuning(self) -> float:
        """omega_q - omega_R, defined for degenerate resonators only."""
        if not math.isclose(self.omega_R1, self.omega_R2, rel_tol=1e-12):
            raise ValueError("detuning is only defined when omega_R1 == omega_R2")
        return self.omega_q - self.omega_R1

    def with_kappa(self, kappa: float) -> "DerivedParams":
        return replace(self, kappa=float(kappa))


def josephson_energy(params: CircuitParams, constants: PhysicalConstants = SI) -> float:
    """Flux-tuned Josephson energy of the asymmetric SQUID.

    Returns ``|(E_J1 + E_J2) cos(x) sqrt(1 + d^2 tan^2(x))|`` with
    ``x = phi_ext / (2 Phi_0)``. The absolute value keeps the energy
    non-negative past the first zero of the cosine.
    """
    total = params.E_J1 + params.E_J2
    if not total > 0:
        raise ValueError("E_J1 + E_J2 must be positive")
    d = params.d_asym
    x = params.phi_ext / (2.0 * constants.flux_quantum)
    # cos(x) sqrt(1 + d^2 tan^2 x) == sqrt(cos^2 x + d^2 sin^2 x), finite at x = pi/2
    return total * math.sqrt(math.cos(x) ** 2 + (d * math.sin(x)) ** 2)


def derive(params: CircuitParams, constants: PhysicalConstants = SI) -> DerivedParams:
    """Compute every derived quantity of the circuit at its current flux."""
    e, hbar = constants.elementary_charge, constants.reduced_planck
    E_C = e**2 / (2.0 * params.C_T)
    E_J = josephson_energy(params, constants)
    hw_q = math.sqrt(8.0 * E_C * E_J) - E_C
    if not (E_J > 0 and hw_q > 0):
        raise ValueError(
            f"qubit frequency undefined at this flux (E_J_eff={E_J:.3e} J, E_C={E_C:.3e} J)"
        )
    w_R1 = 1.0 / math.sqrt(params.C_R1 * params.L_R1)
    w_R2 = 1.0 / math.sqrt(params.C_R2 * params.L_R2)
    eps1, eps2 = hbar * w_R1 / 2.0, hbar * w_R2 / 2.0

    def g(C_q, C_R, eps):
        return -(C_q / math.sqrt(params.C_T * C_R)) * (2.0 * E_C * E_J * eps**2) ** 0.25 / hbar

    kappa = (params.C_q1 * params.C_q2 / (params.C_T * math.sqrt(params.C_R1 * params.C_R2))
             * math.sqrt(eps1 * eps2) / hbar)
    return DerivedParams(
        E_C=E_C,
        E_J_eff=E_J,
        omega_q=hw_q / hbar,
        omega_R1=w_R1,
        omega_R2=w_R2,
        g1=g(params.C_q1, params.C_R1, eps1),
        g2=g(params.C_q2, params.C_R2, eps2),
        kappa=kappa,
        eps_R1=eps1,
        eps_R2=eps2,
        constants=constants,
    )


def capacitance_matrix(params: CircuitParams) -> np.ndarray:
    """Exact 3x3 capacitance matrix over the node fluxes (phi_J, phi_R1, phi_R2)."""
    p = params
    return np.array([
        [p.C_T + p.C_q1 + p.C_q2, -p.C_q1, -p.C_q2],
        [-p.C_q1, p.C_R1 + p.C_q1 + p.C_R1R2, -p.C_R1R2],
        [-p.C_q2, -p.C_R1R2, p.C_R2 + p.C_q2 + p.C_R1R2],
    ])


def _approx_det(p: CircuitParams) -> float:
    return p.C_T * (p.C_R1 * p.C_R2 + p.C_R1R2 * (p.C_R1 + p.C_R2))


def approximate_inverse_capacitance(params: CircuitParams) -> np.ndarray:
    """Small-coupling-capacitance inverse, accurate to O(C_q/C_T, C_q/C_R).

    With ``C_R1R2 = 0`` this is the familiar form with 1/C_T, 1/C_Rk on the
    diagonal and C_q1 C_q2 / (C_R1 C_R2 C_T) between the resonators.
    """
    p = params
    det = _approx_det(p)
    rr = (p.C_q1 * p.C_q2 + p.C_R1R2 * p.C_T) / det
    j1 = p.C_q1 * p.C_R2 / det
    j2 = p.C_q2 * p.C_R1 / det
    return np.array([
        [1.0 / p.C_T, j1, j2],
        [j1, p.C_T * (p.C_R2 + p.C_R1R2) / det, rr],
        [j2, rr, p.C_T * (p.C_R1 + p.C_R1R2) / det],
    ])


def collateral_with_parasitic(params: CircuitParams, constants: PhysicalConstants = SI) -> float:
    """Resonator-resonator coupling including a direct parasitic capacitance.

    The charge-coupling coefficient (C_q1 C_q2 + C_R1R2 C_T) / Det(C) is
    converted to an angular frequency with the same zero-point factors as
    the collateral coupling, so ``C_R1R2 = 0`` gives back ``derive().kappa``.
    """
    p = params
    coeff = (p.C_q1 * p.C_q2 + p.C_R1R2 * p.C_T) / _approx_det(p)
    hbar = constants.reduced_planck
    w1 = 1.0 / math.sqrt(p.C_R1 * p.L_R1)
    w2 = 1.0 / math.sqrt(p.C_R2 * p.L_R2)
    eps1, eps2 = hbar * w1 / 2, hbar * w2 / 2
    return coeff * math.sqrt(p.C_R1 * p.C_R2) * math.sqrt(eps1 * eps2) / hbar


def validity_flags(params: CircuitParams, derived: DerivedParams | None = None,
                   factor: float = 10.0) -> dict[str, bool]:
    """Boolean checks of the approximations behind the model.

    ``True`` means the condition holds by at least ``factor``. These are
    advisory; nothing here raises.
    """
    p = params
    dp = derived if derived is not None else derive(p)
    cq = max(p.C_q1, p.C_q2)
    g_max = max(abs(dp.g1), abs(dp.g2))
    flags = {
        "small_coupling_capacitance": p.C_T >= factor * cq and min(p.C_R1, p.C_R2) >= factor * cq,
        "rwa": min(dp.omega_q, dp.omega_R1, dp.omega_R2) >= factor * max(g_max, abs(dp.kappa)),
    }
    if math.isclose(dp.omega_R1, dp.omega_R2, rel_tol=1e-12):
        flags["dispersive"] = abs(dp.detuning) >= factor * g_max
    else:
        flags["dispersive"] = min(abs(dp.omega_q - dp.omega_R1),
                                  abs(dp.omega_q - dp.omega_R2)) >= factor * g_max
    return flags


def nominal_params(ej_over_ec: float = 70.0, coupling_ratio: float = 1 / 50,
                   phi_over_phi0: float = 0.0, constants: PhysicalConstants = SI) -> CircuitParams:
    """The reference circuit: C_Rk = 4 C_T = 400 fF, L_Rk = 0.8 nH.

    ``coupling_ratio`` sets C_qk = ratio * C_Rk and ``ej_over_ec`` each
    junction's energy in units of E_C = e^2 / 2 C_T.
    """
    C_T, C_R, L_R = 100e-15, 400e-15, 0.8e-9
    E_C = constants.elementary_charge**2 / (2 * C_T)
    cp = CircuitParams(
        C_T=C_T, C_q1=coupling_ratio * C_R, C_q2=coupling_ratio * C_R,
        C_R1=C_R, C_R2=C_R, L_R1=L_R, L_R2=L_R,
        E_J1=ej_over_ec * E_C, E_J2=ej_over_ec * E_C,
    )
    return cp.at_flux(phi_over_phi0, constants)
