import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collateral.evolve import CSV_HEADER, Propagator, TraceGrid, population_trace, propagate, sweep_flux
from collateral.fock import HilbertSpace
from collateral.hamiltonians import full_rwa, hamiltonian_at_flux

from oracles import rk4, single_excitation_block


def random_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


@pytest.fixture(scope="module")
def H_rwa(dp70):
    return full_rwa(HilbertSpace(2), dp70)


def test_zero_time_is_identity(H_rwa):
    psi = random_state(np.random.default_rng(0), len(H_rwa))
    np.testing.assert_array_equal(propagate(H_rwa, psi, 0.0), psi)


def test_diagonal_phases():
    E = np.array([1.0, -2.5, 4.0])
    psi = np.ones(3, dtype=complex) / math.sqrt(3)
    np.testing.assert_allclose(propagate(np.diag(E), psi, 0.7), np.exp(-1j * E * 0.7) * psi, atol=1e-15)


def test_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        Propagator(np.array([[0, 1], [0, 0]], dtype=complex))


def test_matches_rk4_on_single_excitation_block(dp70):
    # rotating frame at w_R keeps the step count manageable
    H = single_excitation_block(0.0, dp70.detuning, 0.0, dp70.g1, dp70.g1, dp70.kappa)
    psi0 = np.array([1, 0, 0], dtype=complex)
    t = 20e-9
    max_e = np.abs(np.linalg.eigvalsh(H)).max()
    steps = int(math.ceil(t * 100 * max_e))
    np.testing.assert_allclose(propagate(H, psi0, t), rk4(H, psi0, t, steps), rtol=0, atol=1e-6)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t=st.floats(0, 2e-6))
def test_norm_and_unitarity(H_rwa, seed, t):
    rng = np.random.default_rng(seed)
    p1, p2 = random_state(rng, len(H_rwa)), random_state(rng, len(H_rwa))
    prop = Propagator(H_rwa)
    q1, q2 = prop(p1, t), prop(p2, t)
    assert abs(np.linalg.norm(q1) - 1) < 1e-10
    assert abs(np.vdot(q1, q2) - np.vdot(p1, p2)) < 1e-9


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t1=st.floats(0, 1e-6), t2=st.floats(0, 1e-6))
def test_time_composition(H_rwa, seed, t1, t2):
    psi = random_state(np.random.default_rng(seed), len(H_rwa))
    a = propagate(H_rwa, propagate(H_rwa, psi, t1), t2)
    np.testing.assert_allclose(a, propagate(H_rwa, psi, t1 + t2), rtol=0, atol=1e-9)


def test_excitation_number_conserved(H_rwa):
    sp = HilbertSpace(2)
    Nop = sp.total_excitation_operator()
    psi = random_state(np.random.default_rng(3), sp.dim)
    n0 = np.vdot(psi, Nop @ psi).real
    for psi_t in Propagator(H_rwa).evolve_many(psi, np.linspace(0, 1e-6, 50)):
        assert np.vdot(psi_t, Nop @ psi_t).real == pytest.approx(n0, abs=1e-9)


def test_evolve_many_matches_single_calls(H_rwa):
    psi = random_state(np.random.default_rng(4), len(H_rwa))
    prop = Propagator(H_rwa)
    times = [0.0, 1e-8, 3e-7]
    for t, state in zip(times, prop.evolve_many(psi, times)):
        np.testing.assert_allclose(state, prop(psi, t), atol=1e-12)


def test_population_trace_trivial(dp70):
    sp = HilbertSpace(1)
    psi = sp.basis_state(1, 0, 0)
    H = full_rwa(sp, dp70)
    assert population_trace(H, psi, psi, [0.0])[0] == pytest.approx(1.0)
    from dataclasses import replace
    H0 = full_rwa(sp, replace(dp70, g1=0.0, g2=0.0, kappa=0.0))
    np.testing.assert_allclose(population_trace(H0, psi, psi, np.linspace(0, 1e-6, 20)), 1.0)


@pytest.fixture(scope="module")
def small_grid(cp70):
    fluxes = np.linspace(0.95, 1.05, 11)
    times = np.linspace(0, 1.5e-6, 61)
    return sweep_flux(HilbertSpace(2), cp70, fluxes, times)


def test_grid_shape_and_range(small_grid):
    assert small_grid.populations.shape == (61, 11)
    assert small_grid.valid.all()
    assert np.all(small_grid.populations >= 0)
    assert np.all(small_grid.populations <= 1 + 1e-9)
    np.testing.assert_allclose(small_grid.populations[0], 1.0)


def test_grid_invalid_columns_are_nan(cp70):
    grid = sweep_flux(HilbertSpace(1), cp70, [1.0, math.pi], [0.0, 1e-8])
    assert grid.valid.tolist() == [True, False]
    assert np.isnan(grid.populations[:, 1]).all()
    assert grid.frozen_flux() == 1.0


def test_grid_all_invalid(cp70):
    grid = sweep_flux(HilbertSpace(1), cp70, [math.pi], [0.0])
    with pytest.raises(ValueError):
        grid.frozen_flux()


def test_grid_columns_are_independent(cp70, small_grid):
    one = sweep_flux(HilbertSpace(2), cp70, [small_grid.fluxes[3]], small_grid.times)
    np.testing.assert_array_equal(one.populations[:, 0], small_grid.populations[:, 3])


def test_grid_thread_count_does_not_change_result(cp70, small_grid):
    single = sweep_flux(HilbertSpace(2), cp70, small_grid.fluxes, small_grid.times, threads=1)
    np.testing.assert_array_equal(single.populations, small_grid.populations)


def test_csv_schema(small_grid, tmp_path):
    text = small_grid.to_csv(tmp_path / "g.csv")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 61 * 11
    assert (tmp_path / "g.csv").read_bytes() == text.encode()
    assert "\r" not in text


def test_json_document(small_grid):
    doc = json.loads(small_grid.to_json())
    assert doc["metadata"]["initial_state"] == "|1g0>"
    assert len(doc["populations"]) == 61


def test_grid_shape_validated():
    with pytest.raises(ValueError):
        TraceGrid(np.zeros(3), np.zeros(2), np.zeros((2, 3)), np.ones(2, bool))


def test_sweep_truncation(cp70):
    with pytest.raises(ValueError):
        sweep_flux(HilbertSpace(1), cp70, [1.0], [0.0], N=2)


def test_transmon_variant_runs(cp70):
    grid = sweep_flux(HilbertSpace(2, 3), cp70, [1.0], np.linspace(0, 1e-7, 5), variant="transmon")
    assert grid.valid.all()
    assert np.all(grid.populations <= 1 + 1e-9)
