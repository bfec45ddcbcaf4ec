"""Midpoint-exponential Schrödinger propagator.

The evolution over ``[0, tau]`` is split into ``steps`` equal slices and
approximated by the time ordered product of ``exp(-i H(s_mid) dt)``. Each
factor is exactly unitary and the scheme is second order in ``dt``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from scipy.linalg import expm

from .pauli import InvalidHamiltonianError, PauliDecomposition, SX, SY, SZ
from .spectral import as_state

__all__ = [
    "DEFAULT_STEPS",
    "PerturbationSpec",
    "midpoints",
    "step_unitaries",
    "propagate",
    "propagate_perturbed",
    "perturbed_hamiltonian",
    "gate_fidelity",
    "state_fidelity",
]

DEFAULT_STEPS = 10_000
MIN_STEPS = 100


@dataclass(frozen=True)
class PerturbationSpec:
    """Systematic amplitude error ``epsilon * omega_x(t) sigma_x / 2``."""

    epsilon: float
    kind: str = "amplitude"

    def __post_init__(self):
        if self.kind != "amplitude":
            raise ValueError(f"only the amplitude error model is supported, got {self.kind!r}")
        if not abs(self.epsilon) <= 1.0:
            raise ValueError(f"|epsilon| must not exceed 1, got {self.epsilon!r}")


def midpoints(steps: int) -> np.ndarray:
    return (np.arange(steps) + 0.5) / steps


def _as_matrices(h) -> np.ndarray:
    if isinstance(h, PauliDecomposition):
        return h.matrix()
    m = np.asarray(h, dtype=complex)
    herm = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))))
    if herm > 1e-12:
        raise InvalidHamiltonianError(f"Hamiltonian is not Hermitian (defect {herm:.3g})")
    return m


def _expm_2x2(h, dt):
    # exp(-i a n.sigma) = cos(a) 1 - i sin(a) n.sigma, with a n = c dt and H = c.sigma + c0 1
    c0 = 0.5 * np.real(h[..., 0, 0] + h[..., 1, 1])
    cx = np.real(h[..., 0, 1] + h[..., 1, 0]) / 2
    cy = np.real(0.5j * (h[..., 0, 1] - h[..., 1, 0]))
    cz = 0.5 * np.real(h[..., 0, 0] - h[..., 1, 1])
    a = dt * np.sqrt(cx**2 + cy**2 + cz**2)
    sinc = np.where(a > 0, np.sin(a) / np.where(a > 0, a, 1.0), 1.0) * dt
    out = (
        np.cos(a)[..., None, None] * np.eye(2)
        - 1j * sinc[..., None, None] * (cx[..., None, None] * SX + cy[..., None, None] * SY + cz[..., None, None] * SZ)
    )
    return np.exp(-1j * c0 * dt)[..., None, None] * out


def step_unitaries(hamiltonian: Callable[[Any], Any], tau: float, steps: int) -> np.ndarray:
    """Per-slice exponentials ``exp(-i H(s_k) dt)``, shape ``(steps, d, d)``."""
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be at least {MIN_STEPS}, got {steps}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    s = midpoints(steps)
    h = _as_matrices(hamiltonian(s))
    if h.ndim == 2:
        h = np.broadcast_to(h, (steps,) + h.shape)
    dt = tau / steps
    if h.shape[-1] == 2:
        return _expm_2x2(h, dt)
    return expm(-1j * dt * h)


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    # pairwise reduction keeps later slices on the left: U_N ... U_2 U_1
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            tail = mats[-1:]
            mats = mats[:-1]
        else:
            tail = None
        mats = mats[1::2] @ mats[0::2]
        if tail is not None:
            mats = np.concatenate([mats, tail])
    return mats[0]


def propagate(hamiltonian: Callable[[Any], Any], tau: float, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Evolution operator over ``[0, tau]``.

    ``hamiltonian`` maps an array of normalized times to a
    :class:`PauliDecomposition` with array coefficients, or to a stack of
    Hermitian matrices.
    """
    return _ordered_product(step_unitaries(hamiltonian, tau, steps))


def perturbed_hamiltonian(hamiltonian: Callable[[Any], Any], epsilon: float) -> Callable[[Any], PauliDecomposition]:
    """``H + epsilon omega_x sigma_x / 2`` for a single-qubit drive."""

    def ham(s):
        h = hamiltonian(s)
        if not isinstance(h, PauliDecomposition):
            h = PauliDecomposition.from_matrix(_as_matrices(h), hermitize=False)
        if h.dimension != 2:
            raise ValueError("the amplitude error model is defined for single-qubit drives")
        coeffs = dict(h.coefficients)
        coeffs["X"] = (1.0 + epsilon) * np.asarray(h["X"])
        return PauliDecomposition(2, coeffs)

    return ham


def propagate_perturbed(
    hamiltonian: Callable[[Any], Any],
    perturbation: PerturbationSpec | float,
    tau: float,
    steps: int = DEFAULT_STEPS,
    state=(1.0, 0.0),
) -> np.ndarray:
    """Exact (non-perturbative) evolution of ``state`` under ``H + epsilon H_se``."""
    if not isinstance(perturbation, PerturbationSpec):
        perturbation = PerturbationSpec(float(perturbation))
    psi = as_state(state, 2)
    ham = hamiltonian if perturbation.epsilon == 0.0 else perturbed_hamiltonian(hamiltonian, perturbation.epsilon)
    return propagate(ham, tau, steps) @ psi


def gate_fidelity(actual, target) -> float:
    """Global-phase insensitive overlap ``|tr(target^dagger actual)| / d``."""
    actual = np.asarray(actual)
    target = np.asarray(target)
    if actual.shape != target.shape or actual.shape[-1] != actual.shape[-2]:
        raise ValueError(f"dimension mismatch: {actual.shape} vs {target.shape}")
    d = actual.shape[-1]
    return float(np.abs(np.trace(np.conj(target).T @ actual)) / d)


def state_fidelity(psi, phi) -> float:
    """``|<psi|phi>|^2``."""
    return float(np.abs(np.vdot(psi, phi)) ** 2)
