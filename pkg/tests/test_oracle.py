import numpy as np
import pytest

from qtnsim.circuits import Circuit, Gate
from qtnsim.noise import NoiseModel, bit_flip, depolarizing
from qtnsim.oracle import (
    SimulationCapError,
    density_matrix_simulate,
    error_metric,
    probabilities,
    sigma_exact,
    statevector_simulate,
    zz_expectation,
)

from conftest import random_circuit


def test_h_statevector():
    psi = statevector_simulate(Circuit(1, [Gate("H", (0,))]))
    np.testing.assert_allclose(psi, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)


def test_bell_state():
    psi = statevector_simulate(Circuit(2, [Gate("H", (0,)), Gate("CX", (0, 1))]))
    np.testing.assert_allclose(psi, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-15)


def test_norm_preserved_random_circuit(rng):
    c = random_circuit(rng, 8, 40)
    psi = statevector_simulate(c)
    assert abs(np.vdot(psi, psi).real - 1.0) < 1e-12


def test_statevector_cap():
    with pytest.raises(SimulationCapError):
        statevector_simulate(Circuit(30, []), max_qubits=26)


def test_zz_expectation_signs():
    psi = statevector_simulate(Circuit(2, [Gate("X", (0,))]))  # |10>
    assert zz_expectation(psi, 2, 0, 1) == pytest.approx(-1.0)
    psi = statevector_simulate(Circuit(2, []))  # |00>
    assert zz_expectation(psi, 2, 0, 1) == pytest.approx(1.0)


def test_density_matrix_pure_state_matches_statevector(rng):
    for _ in range(5):
        c = random_circuit(rng, 5, 25)
        psi = statevector_simulate(c)
        rho = density_matrix_simulate(c)
        np.testing.assert_allclose(rho, np.outer(psi, psi.conj()), atol=1e-12)
        np.testing.assert_allclose(np.diagonal(rho).real, probabilities(psi), atol=1e-12)


def test_depolarizing_after_x():
    lam = 0.004
    nm = NoiseModel(all_1q=(depolarizing(lam),))
    rho = density_matrix_simulate(Circuit(1, [Gate("X", (0,))]), nm)
    np.testing.assert_allclose(np.diagonal(rho).real, [lam / 2, 1 - lam / 2], atol=1e-12)


def test_bitflip_preserves_plus_populations():
    nm = NoiseModel(all_1q=(bit_flip(0.5),))
    rho = density_matrix_simulate(Circuit(1, [Gate("H", (0,))]), nm)
    np.testing.assert_allclose(np.diagonal(rho).real, [0.5, 0.5], atol=1e-12)


def test_density_matrix_invariants_under_noise(rng):
    nm = NoiseModel(all_1q=(depolarizing(0.05),), all_2q=(depolarizing(0.1),))
    c = random_circuit(rng, 4, 20)
    rho = density_matrix_simulate(c, nm)
    assert abs(np.trace(rho) - 1.0) < 1e-10
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-10)
    assert np.diagonal(rho).real.min() >= -1e-12


def test_density_matrix_cap():
    with pytest.raises(SimulationCapError):
        density_matrix_simulate(Circuit(14, []))


def test_sigma_exact_cases():
    np.testing.assert_array_equal(sigma_exact(np.diag([1.0, 0.0]).astype(complex)), [1, 0])
    bell = statevector_simulate(Circuit(2, [Gate("H", (0,)), Gate("CX", (0, 1))]))
    rho = np.outer(bell, bell.conj())
    np.testing.assert_allclose(sigma_exact(rho), [0.5, 0, 0, 0.5], atol=1e-15)
    mixed = np.eye(8, dtype=complex) / 8
    np.testing.assert_allclose(sigma_exact(mixed), np.full(8, 1 / 8))
    bad = np.diag([0.5 + 1e-3j, 0.5]).astype(complex)
    with pytest.raises(ValueError):
        sigma_exact(bad)


def test_error_metric_identical_and_orthogonal():
    a = np.array([0.3, 0.7])
    rep = error_metric(a, a)
    assert rep.fidelity == pytest.approx(1.0, abs=1e-12)
    assert rep.error == pytest.approx(0.0, abs=1e-12)
    rep = error_metric(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert rep.fidelity == 0.0
    assert rep.error == 1.0


def test_error_metric_hand_value():
    # independently: (sqrt(0.5*0.25) + sqrt(0.5*0.75))^2 = 0.9330127018922192
    rep = error_metric(np.array([0.5, 0.5]), np.array([0.25, 0.75]))
    assert rep.fidelity == pytest.approx(0.9330127018922192, abs=1e-12)
    assert rep.error == pytest.approx(0.0669872981077808, abs=1e-12)


def test_error_metric_symmetric(rng):
    a = rng.random(8)
    a /= a.sum()
    b = rng.random(8)
    b /= b.sum()
    assert error_metric(a, b).fidelity == pytest.approx(error_metric(b, a).fidelity)
    with pytest.raises(ValueError):
        error_metric(a, b[:4])
