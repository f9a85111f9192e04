"""Truncated Fock-space algebra for the composite system R1 (x) Q (x) R2.

Operators and states are plain dense numpy arrays. The tensor order is
fixed to (R1, Q, R2) and the basis index of ``|n1, q, n2>`` is row-major::

    index = (n1 * qubit_levels + q) * (n_max + 1) + n2
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "HilbertSpace",
    "SUBSYSTEMS",
    "lowering",
    "is_hermitian",
    "commutator",
    "rotating_wave_part",
]

SUBSYSTEMS = ("R1", "Q", "R2")
GROUND, EXCITED = 0, 1


def lowering(levels: int) -> np.ndarray:
    """Single-mode truncated annihilation operator with ``levels`` states."""
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1).astype(complex)


def is_hermitian(op: np.ndarray, rtol: float = 1e-12) -> bool:
    scale = max(np.abs(op).max(), np.finfo(float).tiny)
    return bool(np.abs(op - op.conj().T).max() <= rtol * scale)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


@dataclass(frozen=True)
class HilbertSpace:
    """Composite space with ``n_max`` photons per resonator.

    ``qubit_levels`` is 2 for a strict qubit or 3 to keep the transmon's
    second excited level.
    """

    n_max: int
    qubit_levels: int = 2

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        if self.qubit_levels not in (2, 3):
            raise ValueError("qubit_levels must be 2 or 3")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.n_max + 1, self.qubit_levels, self.n_max + 1)

    @property
    def dim(self) -> int:
        r, q, _ = self.dims
        return r * q * r

    def index(self, n1: int, q: int, n2: int) -> int:
        r, ql, _ = self.dims
        if not (0 <= n1 <= self.n_max and 0 <= n2 <= self.n_max):
            raise IndexError(f"photon number out of range 0..{self.n_max}: ({n1}, {n2})")
        if not 0 <= q < ql:
            raise IndexError(f"qubit level {q} out of range for {ql} levels")
        return (n1 * ql + q) * r + n2

    def labels(self, i: int) -> tuple[int, int, int]:
        """Inverse of `index`."""
        return tuple(int(x) for x in np.unravel_index(i, self.dims))

    def embed(self, op: np.ndarray, subsystem: str) -> np.ndarray:
        if subsystem not in SUBSYSTEMS:
            raise ValueError(f"unknown subsystem {subsystem!r}; expected one of {SUBSYSTEMS}")
        factors = [np.eye(d, dtype=complex) for d in self.dims]
        factors[SUBSYSTEMS.index(subsystem)] = op
        return np.kron(np.kron(factors[0], factors[1]), factors[2])

    def annihilator(self, subsystem: str) -> np.ndarray:
        """Lowering operator of one subsystem embedded in the full space.

        For the qubit with two levels this is sigma^-.
        """
        return self.embed(lowering(self.dims[SUBSYSTEMS.index(subsystem)]), subsystem)

    def creator(self, subsystem: str) -> np.ndarray:
        return self.annihilator(subsystem).conj().T

    def number(self, subsystem: str) -> np.ndarray:
        a = self.annihilator(subsystem)
        return a.conj().T @ a

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def total_excitation_operator(self) -> np.ndarray:
        """N = b^dag b + a1^dag a1 + a2^dag a2 (sigma^+ sigma^- for a qubit)."""
        return self.number("R1") + self.number("Q") + self.number("R2")

    @cached_property
    def excitations(self) -> np.ndarray:
        """Total excitation number of each basis state."""
        n1, q, n2 = np.unravel_index(np.arange(self.dim), self.dims)
        return n1 + q + n2

    def basis_state(self, n1: int, q: int, n2: int) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.index(n1, q, n2)] = 1.0
        return psi

    def qubit_projector(self, level: int) -> np.ndarray:
        proj = np.zeros((self.qubit_levels, self.qubit_levels), dtype=complex)
        proj[level, level] = 1.0
        return self.embed(proj, "Q")

    def qubit_rotation(self, rotation: np.ndarray) -> np.ndarray:
        """Embed a 2x2 rotation acting on {|g>, |e>}; higher levels untouched."""
        u = np.eye(self.qubit_levels, dtype=complex)
        u[:2, :2] = rotation
        return self.embed(u, "Q")


def rotating_wave_part(op: np.ndarray, space: HilbertSpace) -> np.ndarray:
    """Keep only matrix elements between states of equal excitation number."""
    n = space.excitations
    return np.where(n[:, None] == n[None, :], op, 0.0)
