"""Collateral mode-mode coupling for an atom in two crossed optical cavities."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .params import SI, PhysicalConstants

__all__ = [
    "CavityParams",
    "kappa_c",
    "atom_mode_coupling",
    "dipole_from_linewidth",
    "linewidth_from_dipole",
    "g_over_kappa_c",
    "optical_report",
]


@dataclass(frozen=True)
class CavityParams:
    """Crossed-cavity parameters, SI with angular frequencies.

    ``linewidth`` is the decay rate Gamma in s^-1 (rad/s). Use
    `from_linewidth` to pass a value quoted as Gamma / 2 pi in Hz.
    """

    volume: float
    omega1: float
    omega2: float
    omega_a: float
    linewidth: float
    dipole: float | None = None

    def __post_init__(self):
        for name in ("volume", "omega1", "omega2", "omega_a", "linewidth"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.dipole is not None and not self.dipole > 0:
            raise ValueError("dipole must be strictly positive")

    @classmethod
    def resonant(cls, volume: float, omega: float, linewidth: float,
                 linewidth_unit: str = "rad/s", dipole: float | None = None) -> "CavityParams":
        """Both modes and the atom at ``omega``; ``linewidth_unit`` is 'rad/s' or 'hz'."""
        return cls(volume, omega, omega, omega, _to_rate(linewidth, linewidth_unit), dipole)

    @classmethod
    def from_linewidth(cls, volume, omega1, omega2, omega_a, linewidth,
                       linewidth_unit: str = "rad/s", dipole=None) -> "CavityParams":
        return cls(volume, omega1, omega2, omega_a, _to_rate(linewidth, linewidth_unit), dipole)


def _to_rate(value: float, unit: str) -> float:
    if unit == "rad/s":
        return float(value)
    if unit == "hz":
        return 2 * math.pi * float(value)
    raise ValueError(f"linewidth unit must be 'rad/s' or 'hz', got {unit!r}")


def kappa_c(cp: CavityParams, constants: PhysicalConstants = SI) -> float:
    """q^2 / (4 m eps0 V sqrt(w1 w2)) for a valence electron, in rad/s."""
    q, m, eps0 = constants.elementary_charge, constants.electron_mass, constants.vacuum_permittivity
    return q**2 / (4 * m * eps0 * cp.volume * math.sqrt(cp.omega1 * cp.omega2))


def dipole_from_linewidth(cp: CavityParams, constants: PhysicalConstants = SI) -> float:
    """Transition dipole d from Gamma = w_a^3 d^2 / (3 pi eps0 hbar c^3)."""
    c = constants
    return math.sqrt(3 * math.pi * c.vacuum_permittivity * c.reduced_planck
                     * c.light_speed**3 * cp.linewidth / cp.omega_a**3)


def linewidth_from_dipole(cp: CavityParams, constants: PhysicalConstants = SI) -> float:
    if cp.dipole is None:
        raise ValueError("no dipole moment given")
    c = constants
    return cp.omega_a**3 * cp.dipole**2 / (3 * math.pi * c.vacuum_permittivity
                                           * c.reduced_planck * c.light_speed**3)


def atom_mode_coupling(cp: CavityParams, constants: PhysicalConstants = SI) -> float:
    """g = d sqrt(w_a / (2 eps0 hbar V)); d is derived from Gamma if not given."""
    d = cp.dipole if cp.dipole is not None else dipole_from_linewidth(cp, constants)
    return d * math.sqrt(cp.omega_a / (2 * constants.vacuum_permittivity
                                       * constants.reduced_planck * cp.volume))


def g_over_kappa_c(cp: CavityParams, constants: PhysicalConstants = SI) -> float:
    """m eps0 sqrt(24 pi V c^3 Gamma) / q^2, valid for resonant modes."""
    c = constants
    return (c.electron_mass * c.vacuum_permittivity
            * math.sqrt(24 * math.pi * cp.volume * c.light_speed**3 * cp.linewidth)
            / c.elementary_charge**2)


def optical_report(cp: CavityParams, constants: PhysicalConstants = SI, rtol: float = 0.01) -> dict:
    """kappa_c, g and both routes to g / kappa_c.

    Raises ``ValueError`` if, for resonant modes, the two ratio routes
    disagree by more than ``rtol``, or if a supplied dipole contradicts the
    linewidth.
    """
    kc = kappa_c(cp, constants)
    g = atom_mode_coupling(cp, constants)
    direct = g_over_kappa_c(cp, constants)
    ratio = g / kc
    if cp.dipole is not None:
        gamma = linewidth_from_dipole(cp, constants)
        if abs(gamma - cp.linewidth) > rtol * cp.linewidth:
            raise ValueError("dipole moment and linewidth are inconsistent")
    resonant = math.isclose(cp.omega1, cp.omega_a) and math.isclose(cp.omega2, cp.omega_a)
    if resonant and abs(ratio - direct) > rtol * direct:
        raise ValueError(f"g/kappa_c routes disagree: {ratio:.6g} vs {direct:.6g}")
    return {
        "kappa_c_rad_s": kc,
        "g_rad_s": g,
        "g_over_kappa_c": direct,
        "g_over_kappa_c_from_g": ratio,
        "volume_m3": cp.volume,
        "linewidth_rad_s": cp.linewidth,
    }
