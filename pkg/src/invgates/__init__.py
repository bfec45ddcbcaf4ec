"""Quantum gates from inverse-engineered Hamiltonians of spectral unitaries.

Modules
-------
schedules    parameter schedules in normalized time
spectral     single- and two-qubit spectral evolution operators
synthesis    H = i dU/dt U^dagger, closed forms and gate presets
propagator   midpoint-exponential Schrödinger propagator and fidelities
robustness   sensitivity to systematic amplitude errors and schedule sweeps
outputs      CSV writers
cli          command-line front end
"""
from .pauli import PauliDecomposition
from .propagator import PerturbationSpec, gate_fidelity, propagate, propagate_perturbed, state_fidelity
from .robustness import (
    SensitivityResult,
    default_theta_schedules,
    perpendicular_input,
    predicted_fidelity,
    robustness_sweep,
    sensitivity_case_one,
    sensitivity_case_one_closed,
    sensitivity_case_two,
    sensitivity_general,
)
from .schedules import Schedule, derivative, evaluate, solve_cycloid_ratio
from .spectral import (
    SingleQubitParams,
    TwoQubitParams,
    basis_single,
    evolved_amplitudes,
    evolved_amplitudes_two,
    u1_at,
    u2_at,
)
from .synthesis import (
    GatePreset,
    cz_hamiltonian,
    hadamard_hamiltonian,
    make_preset,
    omega_closed_form,
    phase_gate_hamiltonian,
    synthesize_numeric,
    target_gate,
)

__version__ = "0.1.0"
