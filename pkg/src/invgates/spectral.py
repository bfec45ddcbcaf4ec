"""Spectrally parameterized evolution operators.

``U(s) = sum_n exp(i varphi_n(s)) |n(s)><n(s)|`` specialized to one qubit

    U1 = |n+><n+| + exp(i varphi) |n-><n-|,
    |n+> = cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>,
    |n-> = exp(i phi) cos(theta/2)|1> - sin(theta/2)|0>,

and to two qubits as a direct sum of two such blocks, one per value of the
first (control) qubit. Basis order is |00>, |01>, |10>, |11>.

All constructors broadcast over array-valued ``s``; matrices come back with
shape ``(..., d, d)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .schedules import Schedule

__all__ = [
    "SingleQubitParams",
    "TwoQubitParams",
    "basis_single",
    "spectral_unitary",
    "u1_from_angles",
    "u1_at",
    "u2_at",
    "unitarity_defect",
    "as_state",
    "evolved_amplitudes",
    "evolved_amplitudes_two",
    "closed_form_amplitudes",
    "closed_form_amplitudes_two",
]

_TWO_PI = 2.0 * math.pi


def _check_phase_start(sched: Schedule, name: str):
    k = round(sched.start_value / _TWO_PI)
    if abs(sched.start_value - k * _TWO_PI) > 1e-12:
        raise ValueError(f"{name} must start at a multiple of 2*pi so that U(0) = 1, got {sched.start_value!r}")


@dataclass(frozen=True)
class SingleQubitParams:
    """Schedules ``theta``, ``varphi`` (eigenphase), ``phi`` (azimuth) and total time ``tau``."""

    theta: Schedule
    varphi: Schedule
    phi: Schedule = field(default_factory=lambda: Schedule.constant(0.0))
    tau: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        _check_phase_start(self.varphi, "varphi")

    def angles(self, s):
        return self.theta(s), self.varphi(s), self.phi(s)

    def rates(self, s):
        """Physical-time derivatives ``(dtheta/dt, dvarphi/dt, dphi/dt)``."""
        t = self.tau
        return self.theta.derivative(s) / t, self.varphi.derivative(s) / t, self.phi.derivative(s) / t


@dataclass(frozen=True)
class TwoQubitParams:
    """Per-subspace schedules; block 1 acts on {|00>,|01>}, block 2 on {|10>,|11>}."""

    theta1: Schedule
    varphi1: Schedule
    theta2: Schedule
    varphi2: Schedule
    phi1: Schedule = field(default_factory=lambda: Schedule.constant(0.0))
    phi2: Schedule = field(default_factory=lambda: Schedule.constant(0.0))
    tau: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau!r}")
        _check_phase_start(self.varphi1, "varphi1")
        _check_phase_start(self.varphi2, "varphi2")

    def block(self, k: int) -> SingleQubitParams:
        if k == 1:
            return SingleQubitParams(self.theta1, self.varphi1, self.phi1, self.tau)
        if k == 2:
            return SingleQubitParams(self.theta2, self.varphi2, self.phi2, self.tau)
        raise ValueError(f"block index must be 1 or 2, got {k}")

    @classmethod
    def from_blocks(cls, first: SingleQubitParams, second: SingleQubitParams) -> TwoQubitParams:
        if first.tau != second.tau:
            raise ValueError("both blocks must share tau")
        return cls(first.theta, first.varphi, second.theta, second.varphi, first.phi, second.phi, first.tau)


def basis_single(theta, phi):
    """Return ``(|n+>, |n->)`` as arrays of shape ``(..., 2)``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    n_plus = np.stack([c + 0j, e * s], axis=-1)
    n_minus = np.stack([-s + 0j, e * c], axis=-1)
    return n_plus, n_minus


def spectral_unitary(eigenphases, basis):
    """Generic ``sum_n exp(i varphi_n) |n><n|``.

    ``basis`` has the basis vectors as columns (shape ``(..., d, d)``) and
    ``eigenphases`` shape ``(..., d)``.
    """
    basis = np.asarray(basis, dtype=complex)
    phases = np.exp(1j * np.asarray(eigenphases, dtype=float))
    return np.einsum("...in,...n,...jn->...ij", basis, phases, basis.conj())


def u1_from_angles(theta, varphi, phi):
    """Single-qubit spectral unitary from instantaneous angles."""
    n_plus, n_minus = basis_single(theta, phi)
    ev = np.exp(1j * np.asarray(varphi, dtype=float))
    p_plus = n_plus[..., :, None] * n_plus[..., None, :].conj()
    p_minus = n_minus[..., :, None] * n_minus[..., None, :].conj()
    return p_plus + ev[..., None, None] * p_minus


def u1_at(params: SingleQubitParams, s):
    return u1_from_angles(*params.angles(s))


def u2_at(params: TwoQubitParams, s):
    b1 = u1_at(params.block(1), s)
    b2 = u1_at(params.block(2), s)
    out = np.zeros(b1.shape[:-2] + (4, 4), dtype=complex)
    out[..., :2, :2] = b1
    out[..., 2:, 2:] = b2
    return out


def unitarity_defect(u) -> float:
    """Largest entry of ``|U U^dagger - 1|``."""
    u = np.asarray(u)
    eye = np.eye(u.shape[-1])
    return float(np.max(np.abs(u @ np.conj(np.swapaxes(u, -1, -2)) - eye)))


def as_state(amplitudes, dim: int | None = None, atol: float = 1e-12) -> np.ndarray:
    """Validate a state vector and return it as a complex array."""
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if dim is not None and psi.shape[0] != dim:
        raise ValueError(f"expected a state of length {dim}, got {psi.shape[0]}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"state must be normalized, got norm {norm!r}")
    return psi


def evolved_amplitudes(params: SingleQubitParams, s, state) -> np.ndarray:
    psi = as_state(state, 2)
    return u1_at(params, s) @ psi


def evolved_amplitudes_two(params: TwoQubitParams, s, state) -> np.ndarray:
    psi = as_state(state, 4)
    return u2_at(params, s) @ psi


def closed_form_amplitudes(params: SingleQubitParams, s, state):
    """Amplitudes ``(alpha, beta)`` from the sigma_pm coefficient formulas.

    Cross-check for :func:`evolved_amplitudes`; uses
    ``sigma_pm = exp(i varphi) +- 1`` and the tilde combinations with
    ``exp(-i phi)`` in alpha and ``exp(+i phi)`` in beta.
    """
    a, b = as_state(state, 2)
    theta, varphi, phi = params.angles(s)
    return _block_amplitudes(a, b, theta, varphi, phi)


def _block_amplitudes(a, b, theta, varphi, phi):
    ev = np.exp(1j * varphi)
    sp, sm = ev + 1, ev - 1
    alpha_t = a * np.cos(theta) + b * np.exp(-1j * phi) * np.sin(theta)
    beta_t = b * np.cos(theta) - a * np.exp(1j * phi) * np.sin(theta)
    return (a * sp - sm * alpha_t) / 2, (b * sp + sm * beta_t) / 2


def closed_form_amplitudes_two(params: TwoQubitParams, s, state, printed: bool = False):
    """Coefficients of |00>, |01>, |10>, |11> from the per-block formulas.

    ``printed=True`` swaps the azimuthal phase signs inside the tilde terms
    (``exp(+i phi_k)`` in the first, ``exp(-i phi_k)`` in the second), which
    disagrees with the operator whenever ``phi_k`` is not a multiple of pi.
    """
    a, b, c, d = as_state(state, 4)
    out = []
    for k, (x, y) in ((1, (a, b)), (2, (c, d))):
        theta, varphi, phi = params.block(k).angles(s)
        out.extend(_block_amplitudes(x, y, theta, varphi, -phi if printed else phi))
    return tuple(out)
