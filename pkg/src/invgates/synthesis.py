"""Hamiltonian synthesis ``H = i dU/dt U^dagger`` for spectral unitaries.

Every synthesized Hamiltonian is returned traceless: the identity part only
contributes a global phase and is dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Mapping

import numpy as np

from .pauli import PauliDecomposition
from .schedules import Schedule
from .spectral import SingleQubitParams, TwoQubitParams, u1_at, u2_at, unitarity_defect

__all__ = [
    "InvalidEvaluatorError",
    "PresetError",
    "synthesize_numeric",
    "omega_closed_form",
    "single_qubit_hamiltonian",
    "two_qubit_closed_form",
    "two_qubit_hamiltonian",
    "phase_gate_hamiltonian",
    "hadamard_hamiltonian",
    "cz_hamiltonian",
    "GatePreset",
    "make_preset",
    "target_gate",
    "GATE_NAMES",
    "XI_S",
    "XI_T",
    "XI_Z",
]

XI_S = math.pi / 2
XI_T = math.pi / 4
XI_Z = math.pi

Hamiltonian = Callable[[Any], PauliDecomposition]


class InvalidEvaluatorError(ValueError):
    """The unitary evaluator returned a non-unitary matrix."""


class PresetError(ValueError):
    """Schedules violate the boundary conditions of a gate preset."""


def _fd_derivative(evaluator, s, h):
    # second order everywhere: central in the interior, shifted stencil near the ends
    shift = np.where(s - h < 0.0, 1.0, np.where(s + h > 1.0, -1.0, 0.0))
    c = s + shift * h
    u_m, u_0, u_p = evaluator(c - h), evaluator(c), evaluator(c + h)
    k = shift[..., None, None]
    return (u_p - u_m) / (2 * h) - k * (u_p - 2 * u_0 + u_m) / h


def synthesize_numeric(
    unitary_evaluator: Callable[[Any], np.ndarray],
    s,
    tau: float,
    step: float = 1e-6,
    richardson: bool = False,
) -> PauliDecomposition:
    """Traceless Hamiltonian from finite differences of ``U(s)``.

    Parameters
    ----------
    unitary_evaluator
        Maps normalized time (scalar or array) to unitary matrices ``(..., d, d)``.
    s
        Normalized time(s) at which to synthesize.
    tau
        Total evolution time; ``dt = tau * ds``.
    step
        Finite-difference step in ``s``.
    richardson
        Combine steps ``h`` and ``h/2`` to cancel the leading ``O(h^2)`` error.
    """
    s_arr = np.asarray(s, dtype=float)
    u = np.asarray(unitary_evaluator(s_arr), dtype=complex)
    defect = unitarity_defect(u)
    if defect > 1e-8:
        raise InvalidEvaluatorError(f"evaluator output is not unitary (defect {defect:.3g})")
    du = _fd_derivative(unitary_evaluator, s_arr, step)
    if richardson:
        du = (4 * _fd_derivative(unitary_evaluator, s_arr, step / 2) - du) / 3
    h = 1j * (du / tau) @ np.conj(np.swapaxes(u, -1, -2))
    return PauliDecomposition.from_matrix(h, hermitize=True)


def _omega_components(theta, varphi, phi, dtheta, dvarphi, dphi, printed=False):
    st, ct = np.sin(theta), np.cos(theta)
    sv, cv1 = np.sin(varphi), np.cos(varphi) - 1.0
    sp, cp = np.sin(phi), np.cos(phi)
    common = dtheta * ct * sv + dvarphi * st
    # the variant omega_x carries +dphi sin(theta) sin(varphi) here; i dU/dt U^dagger gives a minus
    lateral = dphi * st * sv if printed else -dphi * st * sv
    wx = cv1 * dphi * cp * ct * st + common * cp + (lateral + cv1 * dtheta) * sp
    wy = cv1 * dphi * sp * st * ct + sp * common + (dphi * st * sv - cv1 * dtheta) * cp
    wz = -dtheta * st * sv - cv1 * dphi * st**2 + dvarphi * ct
    return wx, wy, wz


def omega_closed_form(params: SingleQubitParams, s, printed: bool = False) -> PauliDecomposition:
    """Analytic drive vector ``omega(s)`` of ``H = omega . sigma / 2``.

    ``printed=True`` flips the sign of the ``dphi sin(theta) sin(varphi) sin(phi)``
    term of omega_x. That variant agrees with the exact expression only when
    ``sin(phi) = 0`` and is kept for comparison.
    """
    wx, wy, wz = _omega_components(*params.angles(s), *params.rates(s), printed=printed)
    return PauliDecomposition(2, {"X": wx / 2, "Y": wy / 2, "Z": wz / 2})


def single_qubit_hamiltonian(params: SingleQubitParams, printed: bool = False) -> Hamiltonian:
    return lambda s: omega_closed_form(params, s, printed=printed)


def two_qubit_closed_form(params: TwoQubitParams, s) -> PauliDecomposition:
    """Analytic two-qubit Hamiltonian for the block-diagonal spectral unitary.

    Block ``k`` contributes ``|k-1><k-1| (x) (omega_k . sigma / 2 - dvarphi_k/dt / 2)``;
    with ``|0><0| = (1 + Z)/2`` and ``|1><1| = (1 - Z)/2`` this expands to
    ``I sigma``, ``Z sigma`` and ``ZI`` terms.
    """
    w1 = _omega_components(*params.block(1).angles(s), *params.block(1).rates(s))
    w2 = _omega_components(*params.block(2).angles(s), *params.block(2).rates(s))
    dv1 = params.varphi1.derivative(s) / params.tau
    dv2 = params.varphi2.derivative(s) / params.tau
    coeffs = {}
    for a, x1, x2 in zip("XYZ", w1, w2):
        coeffs["I" + a] = (x1 + x2) / 4
        coeffs["Z" + a] = (x1 - x2) / 4
    coeffs["ZI"] = (dv2 - dv1) / 4
    return PauliDecomposition(4, coeffs)


def two_qubit_hamiltonian(params: TwoQubitParams) -> Hamiltonian:
    return lambda s: two_qubit_closed_form(params, s)


def _congruent(x: float, y: float, period: float = 2 * math.pi, atol: float = 1e-9) -> bool:
    d = (x - y) / period
    return abs(d - round(d)) * period <= atol


def _require_boundary(sched: Schedule, name: str, start: float | None = None, end: float | None = None, modulo=None):
    if start is not None and not _congruent(sched.value(0.0), start, modulo or 2 * math.pi):
        raise PresetError(f"{name} must start at {start} (mod 2 pi), got {sched.value(0.0)!r}")
    if end is not None:
        v1 = sched.value(1.0)
        ok = _congruent(v1, end, modulo) if modulo else abs(v1 - end) <= 1e-9
        if not ok:
            raise PresetError(f"{name} must end at {end!r}{' (mod 2 pi)' if modulo else ''}, got {v1!r}")


def phase_gate_hamiltonian(xi: float, varphi: Schedule, tau: float, theta: Schedule | None = None) -> Hamiltonian:
    """Phase-shift gate ``diag(1, exp(i xi))`` Hamiltonian.

    With the default ``theta = 0`` this is ``H = dvarphi/dt sigma_z / 2``. A
    time-dependent ``theta`` ending at a multiple of 2 pi gives another member
    of the family (``phi = 0``), at the price of x and y drives.
    """
    _require_boundary(varphi, "varphi", start=0.0, end=xi)
    if theta is None:
        return lambda s: PauliDecomposition(2, {"Z": np.asarray(varphi.derivative(s)) / tau / 2})
    _require_boundary(theta, "theta", end=0.0, modulo=2 * math.pi)
    return single_qubit_hamiltonian(SingleQubitParams(theta, varphi, Schedule.constant(0.0), tau))


def hadamard_hamiltonian(varphi: Schedule, tau: float, theta: Schedule | None = None) -> Hamiltonian:
    """Hadamard Hamiltonian; ``omega_x = omega_z = dvarphi/dt / sqrt 2`` for constant ``theta = pi/4``."""
    _require_boundary(varphi, "varphi", start=0.0, end=math.pi)
    if theta is None:
        def ham(s):
            w = np.asarray(varphi.derivative(s)) / (tau * math.sqrt(2))
            return PauliDecomposition(2, {"X": w / 2, "Z": w / 2})
        return ham
    _require_boundary(theta, "theta", end=math.pi / 4)
    return single_qubit_hamiltonian(SingleQubitParams(theta, varphi, Schedule.constant(0.0), tau))


def cz_hamiltonian(xi: float, varphi2: Schedule, tau: float) -> Hamiltonian:
    """Controlled phase ``diag(1, 1, 1, exp(i xi))``.

    ``H = dvarphi2/dt / 4 (I Z + Z I - Z Z)``.
    """
    _require_boundary(varphi2, "varphi2", start=0.0, end=xi)

    def ham(s):
        w = np.asarray(varphi2.derivative(s)) / tau / 4
        return PauliDecomposition(4, {"IZ": w, "ZI": w, "ZZ": -w})

    return ham


GATE_NAMES = ("S", "T", "Z", "PHASE", "HADAMARD", "CZ")
_FIXED_XI = {"S": XI_S, "T": XI_T, "Z": XI_Z}


def target_gate(name: str, xi: float | None = None) -> np.ndarray:
    """Standard matrix for a preset name."""
    name = name.upper()
    if name in _FIXED_XI:
        xi = _FIXED_XI[name]
    if name in ("S", "T", "Z", "PHASE"):
        return np.diag([1.0, np.exp(1j * xi)])
    if name == "HADAMARD":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if name == "CZ":
        return np.diag([1.0, 1.0, 1.0, np.exp(1j * (math.pi if xi is None else xi))])
    raise PresetError(f"unknown gate {name!r}; expected one of {GATE_NAMES}")


def _sched(spec, default: Schedule, end: float) -> Schedule:
    if spec is None:
        return default
    if isinstance(spec, Schedule):
        return spec
    if isinstance(spec, (str, Mapping)):
        return Schedule.from_config(spec, end_value=end)
    raise PresetError(f"cannot interpret schedule {spec!r}")


@dataclass(frozen=True)
class GatePreset:
    """A gate target together with schedules satisfying its boundary conditions."""

    name: str
    xi: float | None
    params: SingleQubitParams | TwoQubitParams

    @property
    def dimension(self) -> int:
        return 4 if self.name == "CZ" else 2

    def target(self) -> np.ndarray:
        return target_gate(self.name, self.xi)

    def unitary(self, s):
        return u2_at(self.params, s) if self.name == "CZ" else u1_at(self.params, s)

    def hamiltonian(self) -> Hamiltonian:
        p = self.params
        tau = p.tau
        if self.name == "CZ":
            simple = all(sch.is_constant and sch.end_value == 0.0 for sch in (p.theta1, p.phi1, p.theta2, p.phi2))
            return cz_hamiltonian(self.xi, p.varphi2, tau) if simple else two_qubit_hamiltonian(p)
        flat = p.phi.is_constant and p.phi.end_value == 0.0 and p.theta.is_constant
        if flat and self.name == "HADAMARD" and p.theta.end_value == math.pi / 4:
            return hadamard_hamiltonian(p.varphi, tau)
        if flat and self.name != "HADAMARD" and p.theta.end_value == 0.0:
            return phase_gate_hamiltonian(self.xi, p.varphi, tau)
        return single_qubit_hamiltonian(p)


def make_preset(
    name: str,
    xi: float | None = None,
    tau: float = 1.0,
    theta=None,
    varphi=None,
    phi=None,
) -> GatePreset:
    """Build and validate a gate preset.

    Schedules may be :class:`Schedule` objects, kind names (``"linear"``) or
    config mappings; missing end values are filled from the gate's boundary
    conditions. Defaults are ``theta`` constant, ``phi = 0`` and linear
    ``varphi``.

    Raises
    ------
    PresetError
        On unknown gates or schedules violating the boundary conditions.
    """
    name = name.upper()
    if name not in GATE_NAMES:
        raise PresetError(f"unknown gate {name!r}; expected one of {GATE_NAMES}")
    if name in _FIXED_XI:
        if xi is not None and not math.isclose(xi, _FIXED_XI[name], abs_tol=1e-12):
            raise PresetError(f"gate {name} fixes xi = {_FIXED_XI[name]!r}")
        xi = _FIXED_XI[name]
    elif name == "HADAMARD":
        xi = None
    elif name == "CZ" and xi is None:
        xi = math.pi
    elif xi is None:
        raise PresetError("PHASE gate needs xi")
    if not tau > 0:
        raise PresetError(f"tau must be positive, got {tau!r}")
    zero = Schedule.constant(0.0)
    try:
        if name == "CZ":
            theta2 = _sched(theta, zero, 0.0)
            varphi2 = _sched(varphi, Schedule.linear(xi), xi)
            phi2 = _sched(phi, zero, 0.0)
            _require_boundary(varphi2, "varphi2", start=0.0, end=xi)
            _require_boundary(theta2, "theta2", end=0.0, modulo=2 * math.pi)
            params = TwoQubitParams(zero, zero, theta2, varphi2, zero, phi2, tau)
        elif name == "HADAMARD":
            th = _sched(theta, Schedule.constant(math.pi / 4), math.pi / 4)
            vp = _sched(varphi, Schedule.linear(math.pi), math.pi)
            ph = _sched(phi, zero, 0.0)
            _require_boundary(vp, "varphi", start=0.0, end=math.pi)
            _require_boundary(th, "theta", end=math.pi / 4)
            _require_boundary(ph, "phi", end=0.0, modulo=2 * math.pi)
            params = SingleQubitParams(th, vp, ph, tau)
        else:
            th = _sched(theta, zero, 0.0)
            vp = _sched(varphi, Schedule.linear(xi), xi)
            ph = _sched(phi, zero, 0.0)
            _require_boundary(vp, "varphi", start=0.0, end=xi)
            _require_boundary(th, "theta", end=0.0, modulo=2 * math.pi)
            params = SingleQubitParams(th, vp, ph, tau)
    except PresetError:
        raise
    except ValueError as exc:
        raise PresetError(str(exc)) from exc
    preset = GatePreset(name, xi, params)
    u_end = preset.unitary(1.0)
    fid = abs(np.trace(preset.target().conj().T @ u_end)) / preset.dimension
    if fid < 1 - 1e-9:
        raise PresetError(f"schedules do not realize {name} at s = 1 (fidelity {fid!r})")
    return preset
