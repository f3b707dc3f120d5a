import cmath
import math
import warnings

import numpy as np
import pytest

from dissipair import linalg, model
from dissipair.errors import (
    BadEnergyError,
    BadIndexError,
    BadWavelengthError,
    NegativeRateError,
)

GG = np.array([0.0, 0.0, 0.0, 1.0], dtype=complex)


# ---- single-qubit embeddings ----


def test_sigma_minus_entries():
    s1 = model.sigma_minus(1)
    assert s1[2, 0] == 1.0 and s1[3, 1] == 1.0
    assert np.count_nonzero(s1) == 2
    s2 = model.sigma_minus(2)
    assert s2[1, 0] == 1.0 and s2[3, 2] == 1.0
    assert np.count_nonzero(s2) == 2


def test_sigma_plus_is_dagger_of_minus():
    for q in (1, 2):
        np.testing.assert_array_equal(model.sigma_plus(q), linalg.dagger(model.sigma_minus(q)))


def test_sigma_z_entries():
    np.testing.assert_array_equal(np.diagonal(model.sigma_z(1)), [1.0, 1.0, -1.0, -1.0])
    np.testing.assert_array_equal(np.diagonal(model.sigma_z(2)), [1.0, -1.0, 1.0, -1.0])


def test_number_operator_of_qubit_1():
    n1 = linalg.dagger(model.sigma_minus(1)) @ model.sigma_minus(1)
    np.testing.assert_array_equal(n1, np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex))


def test_bad_qubit_index():
    for q in (0, 3, -1):
        with pytest.raises(BadIndexError):
            model.sigma_minus(q)
        with pytest.raises(BadIndexError):
            model.sigma_z(q)


# ---- Hamiltonians ----


def test_coherent_hamiltonian_zero_coupling():
    np.testing.assert_array_equal(model.build_coherent_hamiltonian(0.0), np.zeros((4, 4)))


def test_coherent_hamiltonian_unit_coupling():
    h = model.build_coherent_hamiltonian(1.0)
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 2] = expected[2, 1] = 1.0
    np.testing.assert_array_equal(h, expected)


def test_coherent_hamiltonian_hermitian_for_complex_coupling():
    rng = np.random.default_rng(3)
    for _ in range(10):
        j = complex(rng.standard_normal(), rng.standard_normal())
        h = model.build_coherent_hamiltonian(j)
        assert np.abs(h - h.conj().T).max() <= 1e-14


def test_coherent_hamiltonian_spectrum():
    # real J splits the single-excitation doublet into |+-> at energies +-J
    j = 0.8
    es = linalg.hermitian_eigensystem(model.build_coherent_hamiltonian(j))
    np.testing.assert_allclose(es.values, [-j, 0.0, 0.0, j], atol=1e-14)
    plus = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2.0)
    minus = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    assert abs(abs(np.vdot(es.vectors[:, 3], plus)) - 1.0) <= 1e-12
    assert abs(abs(np.vdot(es.vectors[:, 0], minus)) - 1.0) <= 1e-12


def test_drive_hamiltonian():
    np.testing.assert_array_equal(model.build_drive_hamiltonian(1, 0.0), np.zeros((4, 4)))
    h = model.build_drive_hamiltonian(1, 8.0 / 11.0)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    np.testing.assert_allclose(h, (8.0 / 11.0) * linalg.kron(sx, np.eye(2)), atol=1e-15)
    assert h.trace() == 0.0
    assert np.abs(h - h.conj().T).max() <= 1e-14
    with pytest.raises(BadIndexError):
        model.build_drive_hamiltonian(3, 0.1)
    with pytest.raises(NegativeRateError):
        model.build_drive_hamiltonian(1, -0.1)


def test_build_hamiltonian_combines_terms():
    params = model.ModelParams(J=1.0, drive=model.Drive(target=2, amplitude=0.5))
    h = model.build_hamiltonian(params)
    expected = model.build_coherent_hamiltonian(1.0) + model.build_drive_hamiltonian(2, 0.5)
    np.testing.assert_array_equal(h, expected)


# ---- jump operators ----


def test_jump_operators_empty_when_rates_vanish():
    assert model.build_jump_operators(model.ModelParams(J=1.0)) == []


def test_collective_jump_at_isolation_phase():
    params = model.ModelParams(J=1.0, Gamma=2.0, phi=1.5 * math.pi)
    jumps = model.build_jump_operators(params)
    assert len(jumps) == 1
    expected = math.sqrt(2.0) * (model.sigma_minus(1) - 1j * model.sigma_minus(2))
    assert np.abs(jumps[0] - expected).max() <= 1e-15


def test_collective_jump_superradiant_phase():
    jumps = model.build_jump_operators(model.ModelParams(J=1.0, Gamma=1.0, phi=0.0))
    np.testing.assert_allclose(jumps[0], model.sigma_minus(1) + model.sigma_minus(2), atol=1e-15)


def test_dephasing_jumps_included():
    params = model.ModelParams(J=1.0, Gamma=1.0, phi=0.3, kappa=0.25)
    jumps = model.build_jump_operators(params)
    assert len(jumps) == 3
    np.testing.assert_allclose(jumps[1], 0.5 * model.sigma_z(1), atol=1e-15)
    np.testing.assert_allclose(jumps[2], 0.5 * model.sigma_z(2), atol=1e-15)


def test_negative_rates_rejected():
    with pytest.raises(NegativeRateError):
        model.ModelParams(J=1.0, Gamma=-1.0)
    with pytest.raises(NegativeRateError):
        model.ModelParams(J=1.0, kappa=-0.5)


def test_collective_jump_annihilates_ground_state():
    for phi in (0.0, 0.7, math.pi, 1.5 * math.pi):
        jumps = model.build_jump_operators(model.ModelParams(J=1.0, Gamma=2.0, phi=phi))
        assert np.abs(jumps[0] @ GG).max() == 0.0


def test_jump_operators_phase_periodicity():
    for phi in (0.0, 0.3, 2.1, 4.9):
        a = model.build_jump_operators(model.ModelParams(J=1.0, Gamma=2.0, phi=phi))[0]
        b = model.build_jump_operators(model.ModelParams(J=1.0, Gamma=2.0, phi=phi + 2.0 * math.pi))[0]
        assert np.abs(a - b).max() <= 1e-15


# ---- geometry and circuit conversions ----


def test_phase_from_separation():
    lam = 1.0
    assert abs(model.phase_from_separation(model.GeometryParams(0.75 * lam, lam)) - 1.5 * math.pi) <= 2e-15
    assert model.phase_from_separation(model.GeometryParams(0.0, lam)) == 0.0
    assert abs(model.phase_from_separation(model.GeometryParams(0.5 * lam, lam)) - math.pi) <= 2e-15
    with pytest.raises(BadWavelengthError):
        model.GeometryParams(1.0, 0.0)
    with pytest.raises(BadWavelengthError):
        model.GeometryParams(-1.0, 1.0)


def test_collective_decay_matrix():
    np.testing.assert_allclose(model.collective_decay_matrix(2.0, 0.0), np.ones((2, 2)), atol=1e-15)
    m = model.collective_decay_matrix(2.0, 1.5 * math.pi)
    np.testing.assert_allclose(np.diagonal(m), [1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(m[0, 1], -1j, atol=1e-15)
    np.testing.assert_array_equal(model.collective_decay_matrix(0.0, 0.4), np.zeros((2, 2)))
    with pytest.raises(NegativeRateError):
        model.collective_decay_matrix(-1.0, 0.0)


def test_collective_decay_phase_matches_geometry():
    geometry = model.GeometryParams(separation=0.3, wavelength=1.1)
    phi = model.phase_from_separation(geometry)
    m = model.collective_decay_matrix(2.0, phi)
    assert abs(cmath.phase(m[0, 1]) % (2.0 * math.pi) - phi % (2.0 * math.pi)) <= 1e-12


def test_transmon_frequency_values():
    assert model.transmon_frequency(1.0, 20.0) == math.sqrt(160.0) - 1.0
    assert abs(model.transmon_frequency(0.2, 10.0) - 3.8) <= 1e-12
    with pytest.warns(UserWarning):
        assert abs(model.transmon_frequency(1.0, 2.0) - 3.0) <= 1e-12
    with pytest.warns(UserWarning):
        eighth = 1.0 / 8.0
        assert abs(model.transmon_frequency(eighth, eighth) - (math.sqrt(eighth) - eighth)) <= 1e-15


def test_transmon_frequency_validation():
    with pytest.raises(BadEnergyError):
        model.transmon_frequency(0.0, 1.0)
    with pytest.raises(BadEnergyError):
        model.transmon_frequency(1.0, -1.0)


def test_transmon_regime_warning_boundary():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        model.transmon_frequency(1.0, 10.0)
    with pytest.warns(UserWarning):
        model.transmon_frequency(1.0, 9.9)


def test_coupling_from_circuit_direct_value():
    with pytest.warns(UserWarning):
        circuit = model.CircuitParams(E_C1=1.0, E_C2=1.0, E_J1=2.0, E_J2=2.0, E_Cc=1.0)
    assert abs(model.coupling_from_circuit(circuit) - 2.0) <= 1e-14


def test_coupling_from_circuit_quarter_power_scaling():
    base = model.CircuitParams(E_C1=0.05, E_C2=0.05, E_J1=2.0, E_J2=2.0, E_Cc=1.0)
    j0 = model.coupling_from_circuit(base)
    one = model.CircuitParams(E_C1=0.05, E_C2=0.05, E_J1=32.0, E_J2=2.0, E_Cc=1.0)
    assert abs(model.coupling_from_circuit(one) / j0 - 2.0) <= 1e-12
    both = model.CircuitParams(E_C1=0.05, E_C2=0.05, E_J1=32.0, E_J2=32.0, E_Cc=1.0)
    assert abs(model.coupling_from_circuit(both) / j0 - 4.0) <= 1e-12


def test_coupling_vanishes_with_large_coupler_energy():
    small = model.CircuitParams(E_C1=0.05, E_C2=0.05, E_J1=2.0, E_J2=2.0, E_Cc=1.0)
    large = model.CircuitParams(E_C1=0.05, E_C2=0.05, E_J1=2.0, E_J2=2.0, E_Cc=1e6)
    assert model.coupling_from_circuit(large) <= 1e-6 * model.coupling_from_circuit(small)


def test_circuit_params_validation():
    with pytest.raises(BadEnergyError):
        model.CircuitParams(E_C1=0.0, E_C2=1.0, E_J1=20.0, E_J2=20.0, E_Cc=1.0)
    with pytest.raises(BadEnergyError):
        model.CircuitParams(E_C1=1.0, E_C2=1.0, E_J1=20.0, E_J2=-20.0, E_Cc=1.0)
    with pytest.warns(UserWarning):
        model.CircuitParams(E_C1=1.0, E_C2=1.0, E_J1=5.0, E_J2=20.0, E_Cc=1.0)
