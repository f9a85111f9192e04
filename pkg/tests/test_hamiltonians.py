import math
from dataclasses import replace

import numpy as np
import pytest

from collateral.fock import HilbertSpace, commutator, is_hermitian, rotating_wave_part
from collateral.hamiltonians import full_rwa, full_transmon, hamiltonian_at_flux, mediated_sign
from collateral.params import derive

from oracles import single_excitation_block


def test_rejects_three_levels(dp70):
    with pytest.raises(ValueError):
        full_rwa(HilbertSpace(2, 3), dp70)


def test_unknown_convention(dp70):
    with pytest.raises(ValueError):
        full_rwa(HilbertSpace(1), dp70, convention="other")


def test_decoupled_limit_is_diagonal(dp70):
    sp = HilbertSpace(2)
    dp = replace(dp70, g1=0.0, g2=0.0, kappa=0.0)
    H = full_rwa(sp, dp)
    assert np.abs(H - np.diag(np.diag(H))).max() == 0
    for i in range(sp.dim):
        n1, q, n2 = sp.labels(i)
        expected = dp.omega_q * (q + 0.5) + dp.omega_R1 * (n1 + 0.5) + dp.omega_R2 * (n2 + 0.5)
        assert H[i, i].real == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("convention", ["flipped", "circuit"])
def test_single_excitation_block(dp70, convention):
    sp = HilbertSpace(2)
    H = full_rwa(sp, dp70, convention)
    idx = [sp.index(1, 0, 0), sp.index(0, 1, 0), sp.index(0, 0, 1)]
    block = H[np.ix_(idx, idx)]
    shift = (dp70.omega_q + dp70.omega_R1 + dp70.omega_R2) / 2
    oracle = single_excitation_block(dp70.omega_R1, dp70.omega_q, dp70.omega_R2,
                                     dp70.g1, mediated_sign(convention) * dp70.g2, dp70.kappa)
    np.testing.assert_allclose(block - shift * np.eye(3), oracle, rtol=1e-12, atol=1e-3)


def test_rwa_conserves_excitations(dp70):
    sp = HilbertSpace(3)
    H = full_rwa(sp, dp70)
    assert is_hermitian(H)
    c = commutator(H, sp.total_excitation_operator())
    assert np.abs(c).max() < 1e-10 * np.abs(H).max()


def test_transmon_breaks_excitation_number(dp70):
    sp = HilbertSpace(2, 3)
    H = full_transmon(sp, dp70)
    assert is_hermitian(H)
    assert np.abs(commutator(H, sp.total_excitation_operator())).max() > 0


@pytest.mark.parametrize("convention", ["flipped", "circuit"])
def test_transmon_rwa_projection_matches_rwa(dp70, convention):
    # checks the sign algebra of the collateral and exchange products
    sp = HilbertSpace(3, 2)
    projected = rotating_wave_part(full_transmon(sp, dp70, convention=convention), sp)
    np.testing.assert_allclose(projected, full_rwa(sp, dp70, convention), rtol=0, atol=1e-6)


def test_anharmonicity(dp70):
    sp = HilbertSpace(0, 3)
    dp = replace(dp70, g1=0.0, g2=0.0, kappa=0.0)
    E = np.diag(full_transmon(sp, dp)).real
    hbar = dp.constants.reduced_planck
    assert E[2] - 2 * E[1] + E[0] == pytest.approx(-dp.E_C / hbar, rel=1e-12)


@pytest.mark.parametrize("builder", ["rwa", "transmon"])
@pytest.mark.parametrize("field", ["g1", "g2", "kappa"])
def test_linear_in_each_coupling(dp70, builder, field):
    sp = HilbertSpace(2, 2 if builder == "rwa" else 3)
    build = full_rwa if builder == "rwa" else full_transmon
    base = getattr(dp70, field)
    H = [build(sp, replace(dp70, **{field: s * base})) for s in (0.0, 1.0, 2.0)]
    np.testing.assert_allclose(H[2] - H[1], H[1] - H[0], atol=1e-3)
    assert np.abs(H[1] - H[0]).max() > 0


def test_at_flux_composition(cp70):
    sp = HilbertSpace(2)
    np.testing.assert_array_equal(hamiltonian_at_flux(sp, cp70, 0.0), full_rwa(sp, derive(cp70)))


def test_at_flux_kappa_override(cp70):
    sp = HilbertSpace(1)
    H = hamiltonian_at_flux(sp, cp70, 1.0, kappa_override=0.0)
    assert H[sp.index(1, 0, 0), sp.index(0, 0, 1)] == 0


def test_at_flux_domain_error(cp70):
    with pytest.raises(ValueError, match="undefined"):
        hamiltonian_at_flux(HilbertSpace(1), cp70, math.pi)


def test_at_flux_unknown_variant(cp70):
    with pytest.raises(ValueError):
        hamiltonian_at_flux(HilbertSpace(1), cp70, 0.0, variant="lindblad")
