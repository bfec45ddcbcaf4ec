"""Sensitivity of spectral protocols to a systematic amplitude error.

With the perturbed dynamics ``H + epsilon omega_x sigma_x / 2`` the
probability of landing on the ideal output is, to second order,

    P = 1 - epsilon**2 q_S,    q_S = | int <psi_perp(t)| H_se(t) |psi_0(t)> dt |**2,

where ``psi_perp`` is the evolution of the input's orthogonal complement.
Integrals are taken in normalized time so ``q_S`` does not depend on ``tau``.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.integrate import tanhsinh

from .propagator import DEFAULT_STEPS, propagate_perturbed, state_fidelity
from .schedules import Schedule
from .spectral import SingleQubitParams, as_state, u1_at
from .synthesis import omega_closed_form, single_qubit_hamiltonian

__all__ = [
    "QuadratureError",
    "PerturbativeValidityWarning",
    "SensitivityResult",
    "SweepResult",
    "perpendicular_input",
    "sensitivity_general",
    "sensitivity_case_one",
    "sensitivity_case_one_closed",
    "sensitivity_case_two",
    "predicted_fidelity",
    "default_theta_schedules",
    "robustness_sweep",
]

QUAD_ATOL = 1e-13
QUAD_RTOL = 1e-12
VALIDITY_LIMIT = 0.05


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class PerturbativeValidityWarning(UserWarning):
    """``epsilon**2 q_S`` is too large for the second-order formula."""


def predicted_fidelity(q_s: float, epsilon: float) -> float:
    """``1 - epsilon**2 q_S``; warns once the correction exceeds 0.05."""
    loss = epsilon**2 * q_s
    if loss > VALIDITY_LIMIT:
        warnings.warn(
            f"epsilon^2 q_S = {loss:.3g} exceeds {VALIDITY_LIMIT}; second-order estimate unreliable",
            PerturbativeValidityWarning,
            stacklevel=2,
        )
    return float(1.0 - loss)


@dataclass(frozen=True)
class SensitivityResult:
    q_s: float
    amplitude: complex
    abserr: float
    integrand_samples: list[tuple[float, complex]] = field(default_factory=list, repr=False)

    def predicted_fidelity(self, epsilon: float) -> float:
        return predicted_fidelity(self.q_s, epsilon)


def perpendicular_input(state) -> np.ndarray:
    """Orthogonal complement ``(b*, -a*)`` of ``a|0> + b|1>``."""
    a, b = as_state(state, 2)
    return np.array([np.conj(b), -np.conj(a)])


def _breakpoints(*schedules: Schedule) -> np.ndarray:
    # spline knots are where the second derivative jumps; integrate each panel separately
    edges = {0.0, 1.0}
    for sch in schedules:
        if sch.nodes is not None:
            edges.update(sch.nodes)
    return np.array(sorted(edges))


def _integrate(func, label: str, schedules=()):
    """Complex integral of a vectorized ``func`` over ``[0, 1]``, with its error estimate."""
    edges = _breakpoints(*schedules)

    def f(x):
        # tanhsinh hands complex abscissae back once the integrand is complex
        x = np.real(x)
        return np.asarray(func(x.ravel()), dtype=complex).reshape(x.shape)

    res = tanhsinh(f, edges[:-1], edges[1:], atol=QUAD_ATOL, rtol=QUAD_RTOL)
    if not np.all(res.success):
        raise QuadratureError(f"{label}: quadrature did not converge (status {res.status.tolist()}); abserr {np.max(np.abs(res.error)):.3g}")
    return complex(np.sum(res.integral)), float(np.sum(np.abs(res.error)))


def sensitivity_general(params: SingleQubitParams, state=(1.0, 0.0), samples: int = 101) -> SensitivityResult:
    """``q_S = |int_0^1 tau omega_x(s) <psi_perp|sigma_x|psi_0> / 2 ds|**2`` for any protocol and input."""
    psi_in = as_state(state, 2)
    perp_in = perpendicular_input(psi_in)

    def integrand(s):
        u = u1_at(params, s)
        psi, perp = u @ psi_in, u @ perp_in
        # <perp| sigma_x |psi> = conj(perp_0) psi_1 + conj(perp_1) psi_0
        overlap = np.conj(perp[..., 0]) * psi[..., 1] + np.conj(perp[..., 1]) * psi[..., 0]
        wx = 2.0 * omega_closed_form(params, s)["X"]
        return params.tau * wx * overlap / 2

    amp, err = _integrate(integrand, "sensitivity", (params.theta, params.varphi, params.phi))
    grid = np.linspace(0.0, 1.0, samples) if samples else []
    return SensitivityResult(abs(amp) ** 2, amp, err, [(float(s), complex(integrand(s))) for s in grid])


def _case_bracket(theta, varphi):
    return np.cos(2 * theta) * np.sin(varphi / 2) ** 2 - np.cos(varphi / 2) ** 2 + 1j * np.cos(theta) * np.sin(varphi)


def sensitivity_case_one(theta0: float, varphi: Schedule) -> float:
    """``|0>`` input, ``phi = 0``, constant ``theta0``: ``sin^2(theta0)/4 |int dvarphi/ds [...] ds|^2``."""
    amp, _ = _integrate(lambda s: varphi.derivative(s) * _case_bracket(theta0, varphi(s)), "case one", (varphi,))
    return math.sin(theta0) ** 2 / 4 * abs(amp) ** 2


def sensitivity_case_one_closed(theta0: float, phi_end: float, printed: bool = False) -> float:
    """Closed form of :func:`sensitivity_case_one` in terms of ``varphi(1) = phi_end``.

    The integral evaluates to ``-(Phi sin^2 + sin(Phi) cos^2) + i cos(theta0)(1 - cos Phi)``,
    hence a ``cos^2(theta0)`` weight on ``(cos Phi - 1)^2``. ``printed=True``
    evaluates the ``cos^4(theta0)`` variant, kept only for comparison reports.
    """
    c2 = math.cos(theta0) ** 2
    s2 = math.sin(theta0) ** 2
    w = c2**2 if printed else c2
    return s2 / 4 * (w * (math.cos(phi_end) - 1) ** 2 + (c2 * math.sin(phi_end) + phi_end * s2) ** 2)


def sensitivity_case_two(theta: Schedule, varphi: Schedule, printed: bool = False) -> float:
    """``|0>`` input, ``phi = 0``, time-dependent ``theta``.

    The weight multiplying the bracket is the normalized drive
    ``tau omega_x = dtheta/ds cos(theta) sin(varphi) + dvarphi/ds sin(theta)``.
    ``printed=True`` weights the bracket by ``sin^2(theta) dvarphi/ds`` instead.
    That variant neither reduces to case one nor carries the ``dtheta/ds``
    contribution; it is kept only for comparison reports.
    """
    if printed:
        def weight(s):
            return np.sin(theta(s)) ** 2 * varphi.derivative(s)
    else:
        def weight(s):
            th, vp = theta(s), varphi(s)
            return theta.derivative(s) * np.cos(th) * np.sin(vp) + varphi.derivative(s) * np.sin(th)

    amp, _ = _integrate(lambda s: weight(s) * _case_bracket(theta(s), varphi(s)), "case two", (theta, varphi))
    return abs(amp) ** 2 / 4


def default_theta_schedules(theta_end: float = math.pi / 4) -> dict[str, Schedule]:
    """The five interpolations compared for the Hadamard protocol."""
    return {
        "constant": Schedule.constant(theta_end),
        "linear": Schedule.linear(theta_end),
        "quadratic": Schedule.quadratic(theta_end),
        "trigonometric": Schedule.trigonometric(theta_end),
        "cycloid": Schedule.cycloid(end_value=theta_end),
    }


@dataclass
class SweepResult:
    rows: list[dict]
    trajectories: list[dict]
    q_values: dict[str, float]
    errors: dict[str, str]

    @property
    def succeeded(self) -> list[str]:
        return [k for k in self.q_values if k not in self.errors]


_ZERO_STATE = (1.0, 0.0)


def _sweep_one(name, theta, varphi, eps_grid, tau, steps, state, traj_s):
    try:
        params = SingleQubitParams(theta, varphi, Schedule.constant(0.0), tau)
        psi_in = as_state(state, 2)
        if np.allclose(psi_in, _ZERO_STATE, atol=1e-15):
            q = sensitivity_case_two(theta, varphi)
        else:
            q = sensitivity_general(params, psi_in, samples=0).q_s
        ham = single_qubit_hamiltonian(params)
        psi_out = u1_at(params, 1.0) @ psi_in
        rows = []
        for eps in eps_grid:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PerturbativeValidityWarning)
                p_pred = predicted_fidelity(q, eps)
            p_exact = state_fidelity(psi_out, propagate_perturbed(ham, eps, tau, steps, psi_in))
            rows.append({"schedule_name": name, "epsilon": float(eps), "q_s": q, "p_predicted": p_pred, "p_exact": p_exact, "error": ""})
        w = omega_closed_form(params, traj_s)
        wx, _, wz = w.omega
        th = theta(traj_s)
        traj = [
            {"schedule_name": name, "s": float(s), "theta": float(t), "omega_x": float(x), "omega_z": float(z)}
            for s, t, x, z in zip(traj_s, th, wx, wz)
        ]
        return name, q, rows, traj, None
    except Exception as exc:  # collected per schedule, the sweep carries on
        msg = f"{type(exc).__name__}: {exc}"
        rows = [
            {"schedule_name": name, "epsilon": float(eps), "q_s": math.nan, "p_predicted": math.nan, "p_exact": math.nan, "error": msg}
            for eps in eps_grid
        ]
        return name, math.nan, rows, [], msg


def robustness_sweep(
    theta_schedules: Mapping[str, Schedule] | Sequence[Schedule] | None = None,
    varphi: Schedule | None = None,
    epsilon_grid=None,
    tau: float = 1.0,
    steps: int = DEFAULT_STEPS,
    state=_ZERO_STATE,
    trajectory_points: int = 101,
    max_workers: int | None = None,
) -> SweepResult:
    """Compare ``theta`` schedules by sensitivity and by exact perturbed fidelity.

    For every schedule: ``q_S``, predicted and exactly propagated fidelity on
    each ``epsilon``, and the drive trajectories ``omega_x(s)``,
    ``omega_z(s)``. Failures are recorded per schedule instead of aborting.
    Output order follows the input order regardless of ``max_workers``.
    """
    if theta_schedules is None:
        theta_schedules = default_theta_schedules()
    if not isinstance(theta_schedules, Mapping):
        theta_schedules = {f"{sch.kind}{i}": sch for i, sch in enumerate(theta_schedules)}
    if not theta_schedules:
        raise ValueError("need at least one theta schedule")
    varphi = Schedule.linear(math.pi) if varphi is None else varphi
    eps_grid = np.linspace(-0.1, 0.1, 21) if epsilon_grid is None else np.asarray(epsilon_grid, dtype=float)
    traj_s = np.linspace(0.0, 1.0, trajectory_points)
    jobs = [(name, th, varphi, eps_grid, tau, steps, state, traj_s) for name, th in theta_schedules.items()]
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            results = list(pool.map(lambda job: _sweep_one(*job), jobs))
    else:
        results = [_sweep_one(*job) for job in jobs]
    out = SweepResult([], [], {}, {})
    for name, q, rows, traj, err in results:
        out.q_values[name] = q
        out.rows.extend(rows)
        out.trajectories.extend(traj)
        if err:
            out.errors[name] = err
    return out
