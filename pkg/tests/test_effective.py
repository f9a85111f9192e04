import math
import warnings
from dataclasses import replace

import numpy as np
import pytest

from collateral.effective import (DispersiveWarning, candidate_couplings, effective_hamiltonian,
                                  effective_params)
from collateral.evolve import Propagator
from collateral.fock import HilbertSpace, is_hermitian
from collateral.hamiltonians import full_rwa
from collateral.idling import idling_flux_numeric
from collateral.params import derive


def test_dispersive_shifts(dp70):
    ep = effective_params(dp70)
    assert ep.eta1 == dp70.g1**2 / dp70.detuning
    assert ep.eta2 == dp70.g2**2 / dp70.detuning


@pytest.mark.parametrize("convention", ["flipped", "circuit"])
def test_sum_and_difference(dp70, convention):
    ep = effective_params(dp70, convention)
    assert ep.g_eff_ground + ep.g_eff_excited == pytest.approx(2 * dp70.kappa, rel=1e-12)
    diff = abs(ep.g_eff_excited - ep.g_eff_ground)
    assert diff == pytest.approx(abs(2 * dp70.g1 * dp70.g2 / dp70.detuning), rel=1e-12)


def test_conventions_swap_the_two_candidates(dp70):
    plus, minus = candidate_couplings(dp70)
    flipped, circuit = effective_params(dp70, "flipped"), effective_params(dp70, "circuit")
    assert (flipped.g_eff_ground, flipped.g_eff_excited) == pytest.approx((plus, minus))
    assert (circuit.g_eff_ground, circuit.g_eff_excited) == pytest.approx((minus, plus))


def test_no_qubit_coupling(dp70):
    ep = effective_params(replace(dp70, g1=0.0, g2=0.0))
    assert ep.g_eff_ground == ep.g_eff_excited == dp70.kappa


def test_cancellation_at_matched_detuning(dp70):
    # qubit below the resonators by g1 g2 / kappa
    delta = -dp70.g1 * dp70.g2 / dp70.kappa
    dp = replace(dp70, omega_R1=dp70.omega_q - delta, omega_R2=dp70.omega_q - delta)
    ep = effective_params(dp)
    assert abs(ep.g_eff_ground) < 1e-9 * dp70.kappa
    assert ep.g_eff_excited == pytest.approx(2 * dp70.kappa)


def test_excited_coupling_is_twice_kappa_at_idling(cp70):
    phi = idling_flux_numeric(cp70)
    dp = derive(cp70.at_flux(phi))
    assert effective_params(dp).g_eff_excited == pytest.approx(2 * dp.kappa, rel=1e-6)


def test_resonance_is_an_error(dp70):
    dp = replace(dp70, omega_R1=dp70.omega_q, omega_R2=dp70.omega_q)
    with pytest.raises(ValueError, match="on resonance"):
        effective_params(dp)


def test_warning_below_threshold(dp70):
    dp = replace(dp70, omega_R1=dp70.omega_q + 5 * abs(dp70.g1), omega_R2=dp70.omega_q + 5 * abs(dp70.g1))
    with pytest.warns(DispersiveWarning):
        effective_params(dp)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        effective_params(dp70)


def test_bad_qubit_state(dp70):
    with pytest.raises(ValueError):
        effective_params(dp70).coupling("x")


def test_zero_coupling_freezes(dp70):
    ep = replace(effective_params(dp70), g_eff_ground=0.0)
    H = effective_hamiltonian(3, ep, "g")
    assert is_hermitian(H)
    psi = np.zeros(16, dtype=complex)
    psi[3 * 4] = 1
    for t in (1e-8, 1e-6):
        assert abs(Propagator(H)(psi, t)[12]) ** 2 == pytest.approx(1.0)


def test_single_photon_swap_time(dp70):
    ep = replace(effective_params(dp70), eta1=0.0, eta2=0.0)
    H = effective_hamiltonian(1, ep, "g")
    psi = np.array([0, 0, 1, 0], dtype=complex)  # |1, 0>
    out = Propagator(H)(psi, math.pi / (2 * abs(ep.g_eff_ground)))
    assert abs(out[1]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_full_versus_effective_at_delta_over_g_15(dp70):
    # qubit 15 |g| below degenerate resonators, one excitation, one swap period
    w_R = dp70.omega_q + 15 * abs(dp70.g1)
    dp = replace(dp70, omega_R1=w_R, omega_R2=w_R)
    ep = effective_params(dp)
    sp = HilbertSpace(1)
    times = np.linspace(0, math.pi / abs(ep.g_eff_ground), 400)
    full = np.abs(Propagator(full_rwa(sp, dp)).amplitudes(
        sp.basis_state(1, 0, 0), sp.basis_state(0, 0, 1), times)) ** 2
    e10, e01 = np.eye(4, dtype=complex)[2], np.eye(4, dtype=complex)[1]
    eff = np.abs(Propagator(effective_hamiltonian(1, ep, "g")).amplitudes(e10, e01, times)) ** 2
    assert np.abs(full - eff).max() < 0.05


@pytest.mark.parametrize("phi", [0.0, 0.5])
def test_full_swap_half_period(cp70, phi):
    dp = derive(cp70.at_flux(phi))
    ep = effective_params(dp)
    sp = HilbertSpace(1)
    t_half = math.pi / (2 * abs(ep.g_eff_ground))
    times = np.linspace(0, 2 * t_half, 4001)
    P = np.abs(Propagator(full_rwa(sp, dp)).amplitudes(
        sp.basis_state(1, 0, 0), sp.basis_state(0, 0, 1), times)) ** 2
    assert times[np.argmax(P)] == pytest.approx(t_half, rel=0.05)


def test_ground_candidate_selected_by_full_dynamics(cp70):
    # Of the two candidate ground couplings, only kappa + g1 g2 / Delta has a root
    # near where the full two-level dynamics freezes |1g0>.
    from collateral.evolve import sweep_flux
    fluxes = np.linspace(0.98, 1.04, 61)
    grid = sweep_flux(HilbertSpace(1), cp70, fluxes, np.linspace(0, 1.5e-6, 151))
    frozen = grid.frozen_flux()
    plus = [candidate_couplings(derive(cp70.at_flux(p)))[0] for p in fluxes]
    minus = [candidate_couplings(derive(cp70.at_flux(p)))[1] for p in fluxes]
    assert np.any(np.diff(np.sign(plus)))
    assert not np.any(np.diff(np.sign(minus)))
    root = fluxes[np.argmin(np.abs(plus))]
    assert abs(root - frozen) < 0.01
