"""Command-line front end: ``invgates {synth,evolve,sensitivity,sweep}``.

Every command validates its whole configuration before any file is written.
Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .outputs import SWEEP_COLUMNS, TRAJECTORY_COLUMNS, write_csv, write_hamiltonian_csv, write_summary_csv, write_unitary_csv
from .pauli import InvalidHamiltonianError
from .propagator import DEFAULT_STEPS, MIN_STEPS, gate_fidelity, step_unitaries
from .robustness import (
    QuadratureError,
    default_theta_schedules,
    predicted_fidelity,
    robustness_sweep,
    sensitivity_case_one,
    sensitivity_case_one_closed,
    sensitivity_case_two,
    sensitivity_general,
)
from .schedules import Schedule, ScheduleError
from .spectral import as_state, unitarity_defect
from .synthesis import GatePreset, PresetError, make_preset

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2
EPS_GUARD = 0.1

_GATE_ALIASES = {
    "s": "S", "t": "T", "z": "Z", "phase": "PHASE",
    "h": "HADAMARD", "hadamard": "HADAMARD", "cz": "CZ",
}
_CONFIG_KEYS = {
    "gate", "xi", "tau", "theta_schedule", "varphi_schedule", "phi_schedule", "steps",
    "epsilon_min", "epsilon_max", "epsilon_count", "out", "points", "input", "schedules",
    "theta_schedules", "force", "trajectory", "workers",
}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    gate: str = "HADAMARD"
    xi: float | None = None
    tau: float = 1.0
    theta_schedule: Any = None
    varphi_schedule: Any = None
    phi_schedule: Any = None
    steps: int = DEFAULT_STEPS
    epsilon_min: float = -0.1
    epsilon_max: float = 0.1
    epsilon_count: int = 21
    out: Path = Path(".")
    points: int = 101
    input: Any = None
    schedules: list[str] | None = None
    theta_schedules: dict = field(default_factory=dict)
    force: bool = False
    trajectory: bool = False
    workers: int | None = None

    @property
    def epsilon_grid(self) -> np.ndarray:
        if self.epsilon_count < 1:
            raise ConfigError("epsilon count must be at least 1")
        if self.epsilon_count == 1:
            if self.epsilon_min != self.epsilon_max:
                raise ConfigError("a single-point epsilon grid needs epsilon-min == epsilon-max")
            return np.array([self.epsilon_min])
        return np.linspace(self.epsilon_min, self.epsilon_max, self.epsilon_count)


def _schedule_arg(text: str | None):
    # a bare kind name, or an inline JSON object
    if text is None:
        return None
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad schedule JSON {text!r}: {exc}") from exc
    return text


def _parse_state(spec) -> np.ndarray | None:
    if spec is None:
        return None
    if isinstance(spec, str):
        try:
            values = [complex(p.strip().replace(" ", "")) for p in spec.split(",")]
        except ValueError as exc:
            raise ConfigError(f"cannot parse input state {spec!r}") from exc
    else:
        values = [complex(v) if not isinstance(v, (list, tuple)) else complex(v[0], v[1]) for v in spec]
    try:
        return as_state(values, atol=1e-9)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with default values for any flag")
    common.add_argument("--gate", help="s | t | z | phase | hadamard | cz")
    common.add_argument("--xi", type=float, help="phase in radians (phase and cz gates)")
    common.add_argument("--tau", type=float, help="total evolution time")
    common.add_argument("--theta-schedule", help="schedule kind or JSON object")
    common.add_argument("--varphi-schedule", help="schedule kind or JSON object")
    common.add_argument("--phi-schedule", help="schedule kind or JSON object")
    common.add_argument("--steps", type=int, help=f"propagation slices (default {DEFAULT_STEPS})")
    common.add_argument("--epsilon-min", type=float)
    common.add_argument("--epsilon-max", type=float)
    common.add_argument("--epsilon-count", type=int)
    common.add_argument("--points", type=int, help="samples of s for trajectories (default 101)")
    common.add_argument("--input", help="input state amplitudes, e.g. '1,0' or '0.6,0.8j'")
    common.add_argument("--out", type=Path, help="output directory (default: current)")

    parser = _Parser(prog="invgates", description="Synthesize gate Hamiltonians and measure their sensitivity to amplitude errors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("synth", parents=[common], help="write the Hamiltonian trajectory of a gate preset")
    ev = sub.add_parser("evolve", parents=[common], help="propagate a preset and report its gate fidelity")
    ev.add_argument("--trajectory", action="store_true", default=None, help="also write the state trajectory")
    sub.add_parser("sensitivity", parents=[common], help="sensitivity q_S of a single-qubit preset")
    sw = sub.add_parser("sweep", parents=[common], help="robustness sweep over theta schedules")
    sw.add_argument("--schedules", help="comma separated subset of constant,linear,quadratic,trigonometric,cycloid")
    sw.add_argument("--force", action="store_true", default=None, help=f"allow |epsilon| > {EPS_GUARD}")
    sw.add_argument("--workers", type=int, help="threads for the sweep")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge the JSON config file with flags (flags win)."""
    values: dict[str, Any] = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for key, val in vars(args).items():
        if key in ("config", "command") or val is None:
            continue
        if key.endswith("_schedule"):
            val = _schedule_arg(val)
        if key == "schedules":
            val = [v.strip() for v in val.split(",") if v.strip()]
        values[key] = val
    cfg = RunConfig(command=args.command)
    for key, val in values.items():
        setattr(cfg, key, val)
    cfg.out = Path(cfg.out)
    gate = str(cfg.gate).lower()
    if gate not in _GATE_ALIASES:
        raise ConfigError(f"unknown gate {cfg.gate!r}; expected one of {sorted(_GATE_ALIASES)}")
    cfg.gate = _GATE_ALIASES[gate]
    if not isinstance(cfg.tau, (int, float)) or not cfg.tau > 0:
        raise ConfigError(f"tau must be positive, got {cfg.tau!r}")
    if int(cfg.steps) < MIN_STEPS:
        raise ConfigError(f"steps must be at least {MIN_STEPS}")
    cfg.steps = int(cfg.steps)
    if int(cfg.points) < 2:
        raise ConfigError("points must be at least 2")
    cfg.points = int(cfg.points)
    return cfg


def _preset(cfg: RunConfig) -> GatePreset:
    try:
        return make_preset(
            cfg.gate, xi=cfg.xi, tau=float(cfg.tau),
            theta=cfg.theta_schedule, varphi=cfg.varphi_schedule, phi=cfg.phi_schedule,
        )
    except (PresetError, ScheduleError) as exc:
        raise ConfigError(str(exc)) from exc


def _say(lines):
    for line in lines:
        print(line)


def cmd_synth(cfg: RunConfig) -> int:
    preset = _preset(cfg)
    s = np.linspace(0.0, 1.0, cfg.points)
    ham = preset.hamiltonian()(s)
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_hamiltonian_csv(cfg.out / "hamiltonian.csv", s, ham)
    max_label = "max_abs_omega" if preset.dimension == 2 else "max_abs_coupling"
    max_val = max(float(np.max(np.abs(w))) for w in ham.omega) if preset.dimension == 2 else ham.max_abs()
    summary = {"gate": preset.name, "xi": "" if preset.xi is None else preset.xi, "tau": float(cfg.tau), max_label: max_val}
    write_summary_csv(cfg.out / "synth_summary.csv", summary)
    _say(f"{k} = {v}" for k, v in summary.items())
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    preset = _preset(cfg)
    psi = _parse_state(cfg.input)
    if psi is not None and psi.shape[0] != preset.dimension:
        raise ConfigError(f"input state must have {preset.dimension} amplitudes")
    slices = step_unitaries(preset.hamiltonian(), float(cfg.tau), cfg.steps)
    cfg.out.mkdir(parents=True, exist_ok=True)
    u = np.eye(preset.dimension, dtype=complex)
    traj = []
    stride = max(1, cfg.steps // (cfg.points - 1))
    psi0 = psi if psi is not None else np.eye(preset.dimension)[0]
    if cfg.trajectory:
        traj.append(_state_row(0.0, psi0))
    for k, step in enumerate(slices, start=1):
        u = step @ u
        if cfg.trajectory and (k % stride == 0 or k == cfg.steps):
            traj.append(_state_row(k / cfg.steps, u @ psi0))
    fid = gate_fidelity(u, preset.target())
    write_unitary_csv(cfg.out / "unitary.csv", u)
    summary = {
        "gate": preset.name, "xi": "" if preset.xi is None else preset.xi, "tau": float(cfg.tau),
        "steps": cfg.steps, "gate_fidelity": fid, "infidelity": 1.0 - fid, "unitarity_defect": unitarity_defect(u),
    }
    write_summary_csv(cfg.out / "evolve_summary.csv", summary)
    if cfg.trajectory:
        cols = list(traj[0])
        write_csv(cfg.out / "state_trajectory.csv", cols, traj)
    _say(f"{k} = {v}" for k, v in summary.items())
    return EXIT_OK


def _state_row(s, psi):
    row = {"s": float(s)}
    n = int(round(math.log2(len(psi))))
    for idx, amp in enumerate(psi):
        label = format(idx, f"0{n}b")
        row[f"re_{label}"] = float(amp.real)
        row[f"im_{label}"] = float(amp.imag)
    return row


def _case_one_applies(params, psi) -> bool:
    zero_phi = params.phi.is_constant and math.isclose(math.remainder(params.phi.end_value, 2 * math.pi), 0.0, abs_tol=1e-12)
    return params.theta.is_constant and zero_phi and np.allclose(psi, [1.0, 0.0], atol=1e-15)


def cmd_sensitivity(cfg: RunConfig) -> int:
    preset = _preset(cfg)
    if preset.dimension != 2:
        raise ConfigError("sensitivity is defined for single-qubit presets")
    psi = _parse_state(cfg.input)
    psi = np.array([1.0, 0.0], dtype=complex) if psi is None else psi
    if psi.shape[0] != 2:
        raise ConfigError("input state must have 2 amplitudes")
    eps = cfg.epsilon_grid
    params = preset.params
    result = sensitivity_general(params, psi)
    summary: dict[str, object] = {"gate": preset.name, "q_s_general": result.q_s}
    lines = [f"q_s (general) = {result.q_s:.10g}"]
    zero_phi = params.phi.is_constant and params.phi.end_value == 0.0
    if _case_one_applies(params, psi):
        theta0 = params.theta.end_value
        phi_end = params.varphi.value(1.0)
        q1 = sensitivity_case_one(theta0, params.varphi)
        qc = sensitivity_case_one_closed(theta0, phi_end)
        qp = sensitivity_case_one_closed(theta0, phi_end, printed=True)
        summary.update(q_s_case_one=q1, q_s_closed_corrected=qc, q_s_closed_printed=qp, closed_form_discrepancy=qc - qp)
        lines += [
            f"q_s (case one integral) = {q1:.10g}",
            f"q_s (closed form, corrected cos^2) = {qc:.10g}",
            f"q_s (closed form, printed cos^4) = {qp:.10g}",
            f"discrepancy corrected - printed = {qc - qp:.10g}",
        ]
    if zero_phi and np.allclose(psi, [1.0, 0.0], atol=1e-15):
        q2 = sensitivity_case_two(params.theta, params.varphi)
        q2p = sensitivity_case_two(params.theta, params.varphi, printed=True)
        summary.update(q_s_case_two=q2, q_s_case_two_printed=q2p)
        lines += [f"q_s (case two integral) = {q2:.10g}", f"q_s (case two, printed integrand) = {q2p:.10g}"]
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_summary_csv(cfg.out / "sensitivity_summary.csv", summary)
    write_csv(
        cfg.out / "fidelity.csv", ("epsilon", "p_predicted"),
        [{"epsilon": float(e), "p_predicted": predicted_fidelity(result.q_s, float(e))} for e in eps],
    )
    _say(lines)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.gate != "HADAMARD":
        raise ConfigError("the sweep compares theta schedules of the Hadamard protocol; use --gate hadamard")
    eps = cfg.epsilon_grid
    if np.any(np.abs(eps) > 1.0):
        raise ConfigError("|epsilon| must not exceed 1")
    if np.any(np.abs(eps) > EPS_GUARD) and not cfg.force:
        raise ConfigError(f"epsilon grid leaves [-{EPS_GUARD}, {EPS_GUARD}]; pass --force to run anyway")
    available = default_theta_schedules(math.pi / 4)
    try:
        schedules = {name: Schedule.from_config(spec, end_value=math.pi / 4) for name, spec in dict(cfg.theta_schedules).items()}
    except ScheduleError as exc:
        raise ConfigError(str(exc)) from exc
    names = cfg.schedules or ([] if schedules else list(available))
    for name in names:
        if name not in available:
            raise ConfigError(f"unknown schedule {name!r}; expected one of {sorted(available)}")
        schedules.setdefault(name, available[name])
    if not schedules:
        raise ConfigError("schedule list is empty")
    # every theta schedule must close the Hadamard boundary conditions
    for name, theta in schedules.items():
        try:
            make_preset("HADAMARD", tau=float(cfg.tau), theta=theta, varphi=cfg.varphi_schedule)
        except PresetError as exc:
            raise ConfigError(f"schedule {name}: {exc}") from exc
    varphi = make_preset("HADAMARD", varphi=cfg.varphi_schedule).params.varphi
    result = robustness_sweep(schedules, varphi, eps, tau=float(cfg.tau), steps=cfg.steps, trajectory_points=cfg.points, max_workers=cfg.workers)
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_csv(cfg.out / "sweep.csv", SWEEP_COLUMNS, result.rows)
    write_csv(cfg.out / "trajectories.csv", TRAJECTORY_COLUMNS, result.trajectories)
    for name, q in result.q_values.items():
        print(f"{name}: q_s = {q:.10g}" + (f"  [failed: {result.errors[name]}]" if name in result.errors else ""))
    return EXIT_OK if result.succeeded else EXIT_NUMERIC


COMMANDS = {"synth": cmd_synth, "evolve": cmd_evolve, "sensitivity": cmd_sensitivity, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"invgates {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, InvalidHamiltonianError, ScheduleError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"invgates {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
