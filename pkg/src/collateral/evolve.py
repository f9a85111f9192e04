"""Exact time evolution under piecewise-constant Hamiltonians."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import eigh

from .fock import HilbertSpace, is_hermitian
from .hamiltonians import hamiltonian_at_flux
from .params import SI, CircuitParams, PhysicalConstants

__all__ = [
    "Propagator",
    "propagate",
    "population_trace",
    "TraceGrid",
    "sweep_flux",
    "CSV_HEADER",
]

CSV_HEADER = ("time_s", "flux_over_phi0", "population")


class Propagator:
    """Spectral propagator exp(-i H t) of a fixed Hermitian ``H`` (rad/s)."""

    def __init__(self, H: np.ndarray, rtol: float = 1e-9):
        if not is_hermitian(H, rtol):
            raise ValueError("Hamiltonian is not Hermitian")
        # symmetrise away round-off before the solver sees it
        self.energies, self.vectors = eigh((H + H.conj().T) / 2)

    def __call__(self, psi0: np.ndarray, t: float) -> np.ndarray:
        c = self.vectors.conj().T @ psi0
        return self.vectors @ (np.exp(-1j * self.energies * t) * c)

    def evolve_many(self, psi0: np.ndarray, times) -> np.ndarray:
        """States at every time, shape (len(times), dim)."""
        c = self.vectors.conj().T @ psi0
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), self.energies))
        return (phases * c) @ self.vectors.T

    def amplitudes(self, psi0: np.ndarray, target: np.ndarray, times) -> np.ndarray:
        """<target|psi(t)> without forming the full states."""
        c = self.vectors.conj().T @ psi0
        d = self.vectors.conj().T @ target
        phases = np.exp(-1j * np.outer(np.asarray(times, dtype=float), self.energies))
        return phases @ (d.conj() * c)


def propagate(H: np.ndarray, psi0: np.ndarray, t: float) -> np.ndarray:
    """Return exp(-i H t) psi0, with ``H`` in rad/s and ``t`` in seconds."""
    if t == 0:
        return np.array(psi0, dtype=complex)
    return Propagator(H)(psi0, t)


def population_trace(H: np.ndarray, psi0: np.ndarray, target: np.ndarray, times) -> np.ndarray:
    """P(t) = |<target|psi(t)>|^2 at each requested time."""
    return np.abs(Propagator(H).amplitudes(psi0, target, times)) ** 2


@dataclass
class TraceGrid:
    """Population P(t, flux) on a time x flux grid.

    ``populations[i, j]`` is the population at ``times[i]`` and
    ``fluxes[j]`` (in flux quanta). Columns where the Hamiltonian is
    undefined are NaN and flagged False in ``valid``.
    """

    times: np.ndarray
    fluxes: np.ndarray
    populations: np.ndarray
    valid: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.populations.shape != (len(self.times), len(self.fluxes)):
            raise ValueError("populations must have shape (len(times), len(fluxes))")

    def min_population(self) -> np.ndarray:
        """min over time of P for each flux column (NaN for invalid columns)."""
        out = np.full(len(self.fluxes), np.nan)
        out[self.valid] = self.populations[:, self.valid].min(axis=0)
        return out

    def frozen_flux(self) -> float:
        """Flux whose column stays closest to its initial population."""
        if not self.valid.any():
            raise ValueError("no valid flux column")
        return float(self.fluxes[np.nanargmax(self.min_population())])

    def to_csv(self, path=None) -> str:
        """One row per cell; returns the text and writes it if ``path`` is given."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for j, phi in enumerate(self.fluxes):
            for i, t in enumerate(self.times):
                w.writerow((repr(float(t)), repr(float(phi)), repr(float(self.populations[i, j]))))
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "times_s": self.times.tolist(),
            "flux_over_phi0": self.fluxes.tolist(),
            "valid": self.valid.tolist(),
            "populations": [[None if np.isnan(x) else float(x) for x in row]
                            for row in self.populations],
        }
        return json.dumps(doc, indent=2)


def sweep_flux(space: HilbertSpace, cp: CircuitParams, fluxes, times, N: int = 1,
               kappa_override: float | None = None, variant: str = "rwa",
               convention: str = "flipped", threads: int | None = None,
               constants: PhysicalConstants = SI) -> TraceGrid:
    """Population of |N g 0> after starting in |N g 0>, for each flux and time.

    ``fluxes`` are in flux quanta and ``times`` in seconds. ``kappa_override=0``
    switches the collateral coupling off. Flux points where the qubit
    frequency is undefined give an invalid (NaN) column rather than an error.
    """
    if N > space.n_max:
        raise ValueError(f"N={N} exceeds the truncation n_max={space.n_max}")
    fluxes = np.asarray(fluxes, dtype=float)
    times = np.asarray(times, dtype=float)
    psi0 = space.basis_state(N, 0, 0)

    def column(phi):
        try:
            H = hamiltonian_at_flux(space, cp, phi, variant=variant, convention=convention,
                                    kappa_override=kappa_override, constants=constants)
        except ValueError:
            return None
        return np.abs(Propagator(H).amplitudes(psi0, psi0, times)) ** 2

    workers = threads or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        columns = list(pool.map(column, fluxes))

    pops = np.full((len(times), len(fluxes)), np.nan)
    valid = np.zeros(len(fluxes), dtype=bool)
    for j, col in enumerate(columns):
        if col is not None:
            pops[:, j] = col
            valid[j] = True
    meta = {
        "initial_state": f"|{N}g0>",
        "target_state": f"|{N}g0>",
        "N": N,
        "n_max": space.n_max,
        "variant": variant,
        "convention": convention,
        "kappa_override": kappa_override,
        "params": asdict(cp),
    }
    return TraceGrid(times=times, fluxes=fluxes, populations=pops, valid=valid, metadata=meta)
