"""NOON-state generation between the two resonators.

Sequence for N photons (2N + 4 steps):

1. N cycles of [qubit pi pulse, qubit -> R1 swap]    -> |N g 0>
2. pi/2 pulse on the qubit                           -> (|Ng0> + |Ne0>) / sqrt 2
3. free evolution at the idling flux for tau_2, which moves only the
   qubit-excited component from R1 to R2
4. second pi/2 pulse
5. projective qubit measurement; each outcome leaves a NOON state.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from .effective import effective_params
from .evolve import Propagator
from .fock import EXCITED, GROUND, HilbertSpace, rotating_wave_part
from .hamiltonians import full_rwa, full_transmon
from .idling import idling_flux_numeric
from .params import SI, CircuitParams, DerivedParams, PhysicalConstants, derive

__all__ = [
    "HALF_PI",
    "ProtocolStep",
    "ProtocolResult",
    "PreparedState",
    "ScanRow",
    "prepare_fock",
    "half_pi_pulse",
    "pi_pulse",
    "idle_evolve",
    "measure_qubit",
    "noon_fidelity",
    "run_protocol",
    "fidelity_scan",
    "scan_to_csv",
    "SCAN_HEADER",
]

# |g> -> (|g> + |e>)/sqrt2, |e> -> (-|g> + |e>)/sqrt2; columns are images of g, e
HALF_PI = np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex) / math.sqrt(2)
EMPTY_BRANCH = 1e-12

SCAN_HEADER = ("N", "cq_over_cr", "fidelity_g_branch", "fidelity_e_branch", "prob_g",
               "tau1_s", "tau2_s", "steps")


@dataclass(frozen=True)
class ProtocolStep:
    kind: str
    duration: float = 0.0
    flux_setting: float = 0.0
    metadata: dict = field(default_factory=dict)

    KINDS = ("swap_pulse", "pi_pulse", "half_pi_pulse", "idle_evolution", "measure")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown step kind {self.kind!r}")


@dataclass(frozen=True)
class ProtocolResult:
    """One measurement branch.

    ``post_state`` is None when the branch probability is below 1e-12.
    ``theta`` is the relative phase written in the branch's target form,
    (|Ng0> + e^{i theta}|0gN>) for g and (|Ne0> - e^{i theta}|0eN>) for e.
    """

    outcome: str
    post_state: np.ndarray | None
    probability: float
    fidelity: float = float("nan")
    theta: float = float("nan")
    total_time: float = 0.0
    step_log: tuple[ProtocolStep, ...] = ()

    @property
    def steps(self) -> int:
        return len(self.step_log)

    def step_log_json(self) -> str:
        return json.dumps([asdict(s) for s in self.step_log], indent=2)


class PreparedState(NamedTuple):
    state: np.ndarray
    duration: float
    overlap: float
    steps: tuple


def _exchange_hamiltonian(space: HilbertSpace, dp: DerivedParams, convention: str) -> np.ndarray:
    if space.qubit_levels == 2:
        return full_rwa(space, dp, convention)
    return rotating_wave_part(full_transmon(space, dp, convention=convention), space)


def half_pi_pulse(space: HilbertSpace, psi: np.ndarray) -> np.ndarray:
    """Instantaneous qubit pi/2 rotation, identity on both resonators."""
    return space.qubit_rotation(HALF_PI) @ psi


def pi_pulse(space: HilbertSpace, psi: np.ndarray) -> np.ndarray:
    """Two successive pi/2 rotations: |g> -> |e>, |e> -> -|g>."""
    return space.qubit_rotation(HALF_PI @ HALF_PI) @ psi


def swap_time(g1: float, m: int) -> float:
    """Time for a full qubit -> R1 transfer into the m-photon state."""
    return math.pi / (2 * abs(g1) * math.sqrt(m))


def prepare_fock(space: HilbertSpace, cp: CircuitParams, N: int, mode: str = "ideal",
                 detuning_factor: float = 20.0, convention: str = "flipped",
                 constants: PhysicalConstants = SI) -> PreparedState:
    """Load N photons into R1, leaving the qubit in |g> and R2 empty.

    ``mode="ideal"`` returns |N g 0> exactly. ``mode="simulated"`` tunes R1
    onto the qubit and R2 ``detuning_factor * |g2|`` above it, then runs N
    cycles of pi pulse plus resonant exchange under the full Hamiltonian.
    Both report the same duration, sum_m pi / (2 |g1| sqrt m).
    """
    if N > space.n_max:
        raise ValueError(f"N={N} exceeds the truncation n_max={space.n_max}")
    dp = derive(cp, constants)
    target = space.basis_state(N, GROUND, 0)
    durations = [swap_time(dp.g1, m) for m in range(1, N + 1)]
    steps = []
    for m, tau in enumerate(durations, start=1):
        steps.append(ProtocolStep("pi_pulse", 0.0, cp.phi_ext, {"cycle": m}))
        steps.append(ProtocolStep("swap_pulse", tau, cp.phi_ext, {"cycle": m}))
    if mode == "ideal":
        return PreparedState(target, float(sum(durations)), 1.0, tuple(steps))
    if mode != "simulated":
        raise ValueError(f"unknown preparation mode {mode!r}")

    tuned = replace(dp, omega_R1=dp.omega_q,
                    omega_R2=dp.omega_q + detuning_factor * abs(dp.g2))
    prop = Propagator(_exchange_hamiltonian(space, tuned, convention))
    psi = space.basis_state(0, GROUND, 0)
    for tau in durations:
        psi = prop(pi_pulse(space, psi), tau)
    overlap = float(abs(np.vdot(target, psi)) ** 2)
    return PreparedState(psi, float(sum(durations)), overlap, tuple(steps))


def idle_evolve(space: HilbertSpace, psi: np.ndarray, cp: CircuitParams, tau: float,
                flux: float | None = None, convention: str = "flipped",
                constants: PhysicalConstants = SI) -> np.ndarray:
    """Evolve with resonant resonators and the qubit parked at ``flux``.

    ``flux`` (flux quanta) defaults to the numeric idling flux.
    """
    if tau == 0:
        return np.array(psi, dtype=complex)
    if flux is None:
        flux = idling_flux_numeric(cp, convention=convention, constants=constants)
    dp = derive(cp.at_flux(flux, constants), constants)
    return Propagator(_exchange_hamiltonian(space, dp, convention))(psi, tau)


def measure_qubit(space: HilbertSpace, psi: np.ndarray) -> tuple[ProtocolResult, ProtocolResult]:
    """Project onto qubit |g> and |e> and renormalise each branch.

    With a three-level transmon the two probabilities sum to one minus the
    population left in the second excited level.
    """
    branches = []
    for label, level in (("g", GROUND), ("e", EXCITED)):
        projected = space.qubit_projector(level) @ psi
        prob = float(np.vdot(projected, projected).real)
        state = projected / math.sqrt(prob) if prob >= EMPTY_BRANCH else None
        branches.append(ProtocolResult(outcome=label, post_state=state, probability=prob))
    return branches[0], branches[1]


def noon_fidelity(space: HilbertSpace, psi: np.ndarray, N: int, qubit_level: int = GROUND):
    """Best overlap with (|N q 0> + e^{i t}|0 q N>)/sqrt2 over the phase t.

    Returns ``(fidelity, t_opt)``. The optimum is analytic:
    F = (|c1| + |c2|)^2 / 2 at t = arg(c2 / c1).
    """
    if N < 1:
        raise ValueError("a NOON state needs N >= 1")
    c1 = psi[space.index(N, qubit_level, 0)]
    c2 = psi[space.index(0, qubit_level, N)]
    fid = (abs(c1) + abs(c2)) ** 2 / 2
    phase = float(np.angle(c2 * np.conj(c1))) if abs(c1) and abs(c2) else 0.0
    return float(min(fid, 1.0)), phase


def run_protocol(space: HilbertSpace, cp: CircuitParams, N: int, prep_mode: str = "ideal",
                 convention: str = "flipped", flux: float | None = None,
                 detuning_factor: float = 20.0,
                 constants: PhysicalConstants = SI) -> tuple[ProtocolResult, ProtocolResult]:
    """Full sequence; returns the (g, e) measurement branches."""
    if flux is None:
        flux = idling_flux_numeric(cp, convention=convention, constants=constants)
    cp_idle = cp.at_flux(flux, constants)
    dp = derive(cp_idle, constants)
    ep = effective_params(dp, convention)
    tau2 = math.pi / (2 * abs(ep.g_eff_excited))

    prep = prepare_fock(space, cp_idle, N, prep_mode, detuning_factor, convention, constants)
    psi = half_pi_pulse(space, prep.state)
    psi = idle_evolve(space, psi, cp, tau2, flux, convention, constants)
    psi = half_pi_pulse(space, psi)
    steps = prep.steps + (
        ProtocolStep("half_pi_pulse", 0.0, cp_idle.phi_ext),
        ProtocolStep("idle_evolution", tau2, cp_idle.phi_ext, {"flux_over_phi0": flux}),
        ProtocolStep("half_pi_pulse", 0.0, cp_idle.phi_ext),
        ProtocolStep("measure", 0.0, cp_idle.phi_ext),
    )
    total = prep.duration + tau2
    meta = {"prep_overlap": prep.overlap, "tau1": prep.duration, "tau2": tau2}

    out = []
    for branch, level in zip(measure_qubit(space, psi), (GROUND, EXCITED)):
        fid, theta = float("nan"), float("nan")
        if branch.post_state is not None:
            fid, best = noon_fidelity(space, branch.post_state, N, level)
            theta = best if level == GROUND else float(np.angle(-np.exp(1j * best)))
        log = steps[:-1] + (replace(steps[-1], metadata={"outcome": branch.outcome, **meta}),)
        out.append(replace(branch, fidelity=fid, theta=theta, total_time=total, step_log=log))
    return out[0], out[1]


@dataclass(frozen=True)
class ScanRow:
    N: int
    cq_over_cr: float
    fidelity_g_branch: float
    fidelity_e_branch: float
    prob_g: float
    tau1_s: float
    tau2_s: float
    steps: int


def fidelity_scan(cp_family: dict[float, CircuitParams] | Sequence[tuple[float, CircuitParams]],
                  N_range: Sequence[int], prep_mode: str = "ideal", n_max: int | None = None,
                  qubit_levels: int = 2, convention: str = "flipped", threads: int | None = None,
                  constants: PhysicalConstants = SI) -> list[ScanRow]:
    """Run the protocol for every (capacitance ratio, N) pair.

    ``cp_family`` maps C_q/C_R to circuit parameters. Each cell uses
    ``n_max = N + 2`` unless ``n_max`` is given, in which case N may not
    exceed it. Rows are ordered by ratio then N.
    """
    family = list(cp_family.items()) if isinstance(cp_family, dict) else list(cp_family)
    if n_max is not None and max(N_range) > n_max:
        raise ValueError(f"N={max(N_range)} exceeds the truncation n_max={n_max}")
    cells = [(ratio, cp, N) for ratio, cp in family for N in N_range]

    def run(cell):
        ratio, cp, N = cell
        space = HilbertSpace(n_max if n_max is not None else N + 2, qubit_levels)
        g, e = run_protocol(space, cp, N, prep_mode, convention, constants=constants)
        meta = g.step_log[-1].metadata
        return ScanRow(N, ratio, g.fidelity, e.fidelity, g.probability,
                       meta["tau1"], meta["tau2"], g.steps)

    workers = threads or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, cells))


def scan_to_csv(rows: Sequence[ScanRow], path=None) -> str:
    lines = [",".join(SCAN_HEADER)]
    for r in rows:
        lines.append(",".join([str(r.N), repr(r.cq_over_cr)]
                              + [repr(float(x)) for x in (r.fidelity_g_branch, r.fidelity_e_branch,
                                                          r.prob_g, r.tau1_s, r.tau2_s)]
                              + [str(r.steps)]))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
