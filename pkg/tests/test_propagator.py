import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_params
from invgates.pauli import InvalidHamiltonianError, PauliDecomposition, SX, SZ
from invgates.propagator import (
    PerturbationSpec,
    gate_fidelity,
    propagate,
    propagate_perturbed,
    state_fidelity,
    step_unitaries,
)
from invgates.schedules import Schedule
from invgates.spectral import SingleQubitParams, u1_at, unitarity_defect
from invgates.synthesis import hadamard_hamiltonian, make_preset, single_qubit_hamiltonian

ZERO = Schedule.constant(0.0)


def zero_ham(s):
    return PauliDecomposition(2, {"X": np.zeros_like(s)})


def test_zero_hamiltonian_gives_identity():
    np.testing.assert_allclose(propagate(zero_ham, 1.0, 100), np.eye(2), atol=1e-15)


def test_constant_z_matches_rotation():
    xi, tau = 1.3, 2.0
    ham = lambda s: PauliDecomposition(2, {"Z": np.full_like(s, xi / tau / 2)})
    u = propagate(ham, tau, 1000)
    np.testing.assert_allclose(u, np.diag([np.exp(-1j * xi / 2), np.exp(1j * xi / 2)]), atol=1e-12)
    # the same up to global phase as diag(1, e^{i xi})
    assert gate_fidelity(u, np.diag([1, np.exp(1j * xi)])) == pytest.approx(1.0, abs=1e-12)


def test_pauli_rotation_matches_expm(rng):
    c = rng.normal(size=(50, 3))
    ham = lambda s: PauliDecomposition(2, {"X": np.full_like(s, c[0, 0]), "Y": np.full_like(s, c[0, 1]), "Z": np.full_like(s, c[0, 2])})
    steps = step_unitaries(ham, 1.0, 100)
    h = ham(np.array(0.5)).matrix()
    np.testing.assert_allclose(steps[0], expm(-1j * h / 100), atol=1e-14)


def test_hadamard_reaches_target():
    vp = Schedule.linear(math.pi)
    p = SingleQubitParams(Schedule.constant(math.pi / 4), vp, ZERO, 1.0)
    u = propagate(hadamard_hamiltonian(vp, 1.0), 1.0, 10_000)
    assert gate_fidelity(u, u1_at(p, 1.0)) >= 1 - 1e-9


def test_random_protocols_close_the_chain(rng):
    for _ in range(5):
        p = random_params(rng)
        u = propagate(single_qubit_hamiltonian(p), p.tau, 10_000)
        assert gate_fidelity(u, u1_at(p, 1.0)) >= 1 - 1e-8
        assert unitarity_defect(u) < 1e-10


def test_second_order_convergence(rng):
    p = random_params(rng, tau=1.0)
    ham = single_qubit_hamiltonian(p)
    ref = propagate(ham, 1.0, 1_000_000)
    errs = [np.max(np.abs(propagate(ham, 1.0, n) - ref)) for n in (200, 400, 800)]
    for a, b in zip(errs, errs[1:]):
        assert 3.5 < a / b < 4.5


def test_two_qubit_uses_matrix_exponential():
    ham = make_preset("cz").hamiltonian()
    assert gate_fidelity(propagate(ham, 1.0, 1000), np.diag([1, 1, 1, -1])) == pytest.approx(1.0, abs=1e-12)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        propagate(zero_ham, 1.0, 10)
    with pytest.raises(InvalidHamiltonianError):
        propagate(lambda s: np.broadcast_to(np.array([[0, 1], [0, 0]], dtype=complex), np.shape(s) + (2, 2)), 1.0, 100)
    with pytest.raises(InvalidHamiltonianError):
        propagate(lambda s: PauliDecomposition(2, {"X": 1j * np.ones_like(s)}), 1.0, 100)


def test_matrix_valued_hamiltonian_accepted():
    u = propagate(lambda s: np.broadcast_to(0.5 * SX, np.shape(s) + (2, 2)), math.pi, 100)
    np.testing.assert_allclose(u, -1j * SX, atol=1e-12)


def test_perturbed_zero_epsilon_is_unperturbed():
    ham = make_preset("hadamard").hamiltonian()
    psi = propagate_perturbed(ham, 0.0, 1.0, 1000, [1, 0])
    np.testing.assert_allclose(psi, propagate(ham, 1.0, 1000) @ [1, 0], atol=1e-12)


def test_perturbed_hadamard_follows_second_order():
    preset = make_preset("hadamard")
    ham = preset.hamiltonian()
    q = (8 + math.pi**2) / 32
    out = u1_at(preset.params, 1.0) @ [1, 0]
    psi = propagate_perturbed(ham, PerturbationSpec(0.01), 1.0, 10_000, [1, 0])
    loss = 1 - state_fidelity(out, psi)
    assert loss == pytest.approx(1e-4 * q, rel=0.1)


def test_perturbation_without_x_drive_does_nothing():
    ham = make_preset("Z").hamiltonian()
    psi = (np.array([1, 1]) / math.sqrt(2)).astype(complex)
    np.testing.assert_allclose(propagate_perturbed(ham, 0.3, 1.0, 500, psi), propagate(ham, 1.0, 500) @ psi, atol=1e-14)


def test_perturbation_spec_validation():
    with pytest.raises(ValueError):
        PerturbationSpec(1.5)
    with pytest.raises(ValueError):
        PerturbationSpec(0.1, kind="detuning")


def test_gate_fidelity_examples(rng):
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    assert gate_fidelity(u, u) == pytest.approx(1.0, abs=1e-14)
    assert gate_fidelity(np.exp(1j * math.pi / 7) * u, u) == pytest.approx(1.0, abs=1e-14)
    assert gate_fidelity(SX, SZ) == 0.0
    with pytest.raises(ValueError):
        gate_fidelity(np.eye(2), np.eye(4))
