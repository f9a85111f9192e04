"""Locating the idling flux, where the ground-state resonator coupling vanishes."""
from __future__ import annotations

import csv
import io
import math

import numpy as np
from scipy.optimize import bisect

from .effective import effective_params
from .params import SI, CircuitParams, PhysicalConstants, derive

__all__ = [
    "NoIdlingPoint",
    "ground_coupling",
    "idling_flux_numeric",
    "idling_flux_closed_form",
    "effective_coupling_curve",
    "curve_to_csv",
    "CURVE_HEADER",
]

CURVE_HEADER = ("flux_over_phi0", "g_eff_abs_hz", "g_eff_abs_kappa0_hz")


class NoIdlingPoint(ValueError):
    """No flux in the searched range cancels the ground-state coupling."""


def ground_coupling(cp: CircuitParams, phi_over_phi0: float, convention: str = "flipped",
                    kappa_override: float | None = None,
                    constants: PhysicalConstants = SI) -> float:
    """g_eff for the qubit in |g> at the given flux, in rad/s."""
    dp = derive(cp.at_flux(phi_over_phi0, constants), constants)
    if kappa_override is not None:
        dp = dp.with_kappa(kappa_override)
    return effective_params(dp, convention, threshold=0.0).g_eff_ground


def idling_flux_numeric(cp: CircuitParams, bracket=(0.5, 1.5), convention: str = "flipped",
                        kappa_override: float | None = None, xtol: float = 1e-10,
                        constants: PhysicalConstants = SI) -> float:
    """Flux (in flux quanta) where the ground-state effective coupling is zero.

    Bisection inside ``bracket``. Raises `NoIdlingPoint` if the coupling
    does not change sign there, which is always the case for ``kappa = 0``.
    """
    lo, hi = bracket

    def f(phi):
        return ground_coupling(cp, phi, convention, kappa_override, constants)

    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoIdlingPoint(f"no idling point in range [{lo}, {hi}] flux quanta")
    return float(bisect(f, lo, hi, xtol=xtol))


def idling_flux_closed_form(cp: CircuitParams, kappa_override: float | None = None,
                            constants: PhysicalConstants = SI) -> float:
    """Closed-form idling flux for a symmetric circuit with identical junctions.

    Solves ``kappa + g^2 / Delta = 0`` for the square root of the tuned
    Josephson energy,

        sqrt(E_J*) = 2 kappa C_T C_R (E_C + hbar w_R)
                     / (sqrt(2 E_C) (C_q^2 w_R + 4 kappa C_T C_R)),

    then inverts E_J* = 2 E_J cos(phi / 2). This is the ``"flipped"``
    convention's ground-state condition.
    """
    if not (math.isclose(cp.C_q1, cp.C_q2) and math.isclose(cp.C_R1, cp.C_R2)
            and math.isclose(cp.L_R1, cp.L_R2)):
        raise ValueError("closed form needs a symmetric circuit; use idling_flux_numeric")
    if cp.d_asym != 0:
        raise ValueError("closed form assumes identical junctions (d = 0)")
    hbar = constants.reduced_planck
    dp = derive(cp.at_flux(0.0, constants), constants)
    kappa = dp.kappa if kappa_override is None else kappa_override
    E_C, w_R = dp.E_C, dp.omega_R1
    C_T, C_R, C_q = cp.C_T, cp.C_R1, cp.C_q1
    root = (2 * kappa * C_T * C_R * (E_C + hbar * w_R)
            / (math.sqrt(2 * E_C) * (C_q**2 * w_R + 4 * kappa * C_T * C_R)))
    ej_star = root**2
    # each junction carries half of the symmetric SQUID energy
    ej = (cp.E_J1 + cp.E_J2) / 2
    if ej_star > 2 * ej:
        raise NoIdlingPoint("idling point unreachable for this E_J")
    return 2 * math.acos(ej_star / (2 * ej))


def effective_coupling_curve(cp: CircuitParams, flux_grid, convention: str = "flipped",
                             constants: PhysicalConstants = SI) -> np.ndarray:
    """|g_eff| in the ground state with and without kappa over ``flux_grid``.

    Returns an array of shape (len(flux_grid), 3): flux, |g_eff|, |g_eff(kappa=0)|,
    couplings in rad/s.
    """
    rows = []
    for phi in np.asarray(flux_grid, dtype=float):
        with_k = ground_coupling(cp, phi, convention, None, constants)
        without = ground_coupling(cp, phi, convention, 0.0, constants)
        rows.append((phi, abs(with_k), abs(without)))
    return np.array(rows).reshape(-1, 3)


def curve_to_csv(curve: np.ndarray, path=None) -> str:
    """CSV with couplings converted to Hz (divided by 2 pi)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for phi, gk, g0 in curve:
        w.writerow((repr(float(phi)), repr(float(gk / (2 * math.pi))), repr(float(g0 / (2 * math.pi)))))
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
