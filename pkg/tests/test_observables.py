import cmath
import math

import numpy as np
import pytest

from dissipair import model, observables
from dissipair.dynamics import initial_state
from dissipair.errors import InvalidStateError, NegativeRateError, ShapeMismatchError
from dissipair.observables import (
    collective_populations,
    concurrence,
    damping_forces,
    effective_decay_amplitudes,
    isolation_map,
    populations,
    to_collective_basis,
)

from oracles import (
    concurrence_charpoly,
    concurrence_pure,
    random_density_matrix,
    random_pure_state,
    random_unitary,
    werner_state,
)


# ---- populations ----


def test_populations_basis_states():
    assert populations(initial_state("EG")) == (1.0, 0.0)
    assert populations(initial_state("GG")) == (0.0, 0.0)
    p1, p2 = populations(initial_state("PLUS"))
    assert abs(p1 - 0.5) <= 1e-15 and abs(p2 - 0.5) <= 1e-15


def test_populations_rejects_invalid_states():
    with pytest.raises(InvalidStateError):
        populations(2.0 * np.eye(4))
    bad = np.eye(4, dtype=complex) / 4.0
    bad[0, 1] = 1e-3
    with pytest.raises(InvalidStateError):
        populations(bad)
    with pytest.raises(ShapeMismatchError):
        populations(np.eye(2))


# ---- concurrence ----


def test_concurrence_maximally_entangled():
    assert abs(concurrence(initial_state("PLUS")) - 1.0) <= 1e-10
    assert abs(concurrence(initial_state("MINUS")) - 1.0) <= 1e-10


def test_concurrence_separable():
    assert concurrence(initial_state("EG")) == 0.0
    assert concurrence(np.eye(4) / 4.0) == 0.0


def test_concurrence_werner_family():
    # closed form: max(0, (3p - 1)/2)
    assert abs(concurrence(werner_state(0.9)) - 0.85) <= 1e-9
    assert abs(concurrence_charpoly(werner_state(0.9)) - 0.85) <= 1e-6
    assert concurrence(werner_state(1.0 / 3.0)) <= 1e-8
    assert concurrence(werner_state(0.2)) == 0.0


def test_concurrence_matches_charpoly_oracle():
    # full-rank states keep the quartic's roots simple, where np.roots is
    # trustworthy; pure states are covered by the closed form below
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        rho = random_density_matrix(rng)
        worst = max(worst, abs(concurrence(rho) - concurrence_charpoly(rho)))
    assert worst <= 1e-8


def test_concurrence_pure_state_formula():
    rng = np.random.default_rng(103)
    for _ in range(100):
        psi = random_pure_state(rng)
        rho = np.outer(psi, psi.conj())
        assert abs(concurrence(rho) - concurrence_pure(psi)) <= 1e-7


def test_concurrence_local_unitary_invariance():
    rng = np.random.default_rng(107)
    for _ in range(50):
        rho = random_density_matrix(rng)
        u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
        rotated = u @ rho @ u.conj().T
        assert abs(concurrence(rotated) - concurrence(rho)) <= 1e-8


# ---- collective basis ----


def test_to_collective_basis_single_excitation():
    out = to_collective_basis(initial_state("EG"))
    expected = np.zeros((4, 4), dtype=complex)
    expected[1:3, 1:3] = 0.5
    np.testing.assert_allclose(out, expected, atol=1e-15)
    out_ge = to_collective_basis(initial_state("GE"))
    assert abs(out_ge[1, 2] + 0.5) <= 1e-15


def test_to_collective_basis_projectors():
    np.testing.assert_allclose(to_collective_basis(initial_state("EE")), initial_state("EE"), atol=1e-15)
    np.testing.assert_allclose(
        np.diagonal(to_collective_basis(initial_state("PLUS"))).real,
        [0.0, 1.0, 0.0, 0.0],
        atol=1e-15,
    )


def test_to_collective_basis_preserves_trace():
    rng = np.random.default_rng(109)
    for _ in range(20):
        rho = random_density_matrix(rng)
        assert abs(to_collective_basis(rho).trace() - 1.0) <= 1e-12


def test_collective_populations_examples():
    pops = collective_populations(initial_state("GG"))
    assert (pops.P_E, pops.P_plus, pops.P_minus, pops.P_G) == (0.0, 0.0, 0.0, 1.0)
    pops = collective_populations(initial_state("EG"))
    assert abs(pops.P_plus - 0.5) <= 1e-15 and abs(pops.P_minus - 0.5) <= 1e-15


def test_collective_populations_sum_rule():
    rng = np.random.default_rng(113)
    for _ in range(50):
        pops = collective_populations(random_density_matrix(rng))
        total = pops.P_E + pops.P_plus + pops.P_minus + pops.P_G
        assert abs(total - 1.0) <= 1e-9


# ---- damping forces ----


def test_damping_forces_extremes():
    iso = damping_forces(1.0, 2.0, 1.5 * math.pi)
    assert iso.F12 <= 1e-15
    assert abs(iso.F21 - 2.0) <= 1e-15
    assert abs(iso.delta_F + 1.0) <= 1e-15

    rev = damping_forces(1.0, 2.0, 0.5 * math.pi)
    assert abs(rev.delta_F - 1.0) <= 1e-15


def test_damping_forces_reciprocal_cases():
    off = damping_forces(1.0, 0.0, 2.3)
    assert off.F12 == off.F21 == 1.0 and off.delta_F == 0.0
    assert abs(damping_forces(1.0, 2.0, math.pi).delta_F) <= 1e-15
    assert damping_forces(0.0, 0.0, 1.0).delta_F == 0.0


def test_damping_forces_antisymmetry():
    rng = np.random.default_rng(127)
    for _ in range(50):
        j = rng.uniform(0.1, 3.0)
        g = rng.uniform(0.0, 4.0)
        phi = rng.uniform(-7.0, 7.0)
        fwd = damping_forces(j, g, phi).delta_F
        bwd = damping_forces(j, g, -phi).delta_F
        assert abs(fwd + bwd) <= 1e-12


def test_damping_forces_complex_coupling_isolation():
    # J = i (Gamma/2) e^{i phi} silences the force on qubit 1 at any phase
    rng = np.random.default_rng(131)
    for _ in range(20):
        g = rng.uniform(0.5, 4.0)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        j = 1j * 0.5 * g * cmath.exp(1j * phi)
        report = damping_forces(j, g, phi)
        assert report.F12 <= 1e-15
        assert abs(report.delta_F + 1.0) <= 1e-15


def test_damping_forces_rejects_negative_rate():
    with pytest.raises(NegativeRateError):
        damping_forces(1.0, -2.0, 0.0)


# ---- effective decay amplitudes ----


def test_decay_amplitudes_dark_phases():
    e_plus, plus_g, e_minus, minus_g = effective_decay_amplitudes(2.0, 0.0)
    assert abs(e_minus) == 0.0 and abs(minus_g) == 0.0
    assert abs(e_plus - 2.0) <= 1e-15 and abs(plus_g - 2.0) <= 1e-15

    e_plus, plus_g, e_minus, minus_g = effective_decay_amplitudes(2.0, math.pi)
    assert abs(e_plus) <= 1e-15 and abs(plus_g) <= 1e-15
    assert abs(e_minus + 2.0) <= 1e-15 and abs(minus_g - 2.0) <= 1e-15


def test_decay_amplitudes_balanced_phase():
    amps = effective_decay_amplitudes(2.0, 1.5 * math.pi)
    for amp in amps:
        assert abs(abs(amp) - math.sqrt(2.0)) <= 1e-12


def test_decay_amplitudes_rejects_negative_rate():
    with pytest.raises(NegativeRateError):
        effective_decay_amplitudes(-1.0, 0.0)


# ---- isolation map ----


def test_isolation_map_grid():
    gammas = np.array([0.0, 2.0])
    phis = np.array([0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi])
    grid = isolation_map(1.0, gammas, phis)
    assert grid.shape == (2, 4)
    np.testing.assert_allclose(grid[0], np.zeros(4), atol=1e-15)
    assert abs(grid[1, 0]) <= 1e-15
    assert abs(grid[1, 1] - 1.0) <= 1e-12
    assert abs(grid[1, 2]) <= 1e-15
    assert abs(grid[1, 3] + 1.0) <= 1e-12
