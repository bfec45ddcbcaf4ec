import csv
import json
import math

import numpy as np
import pytest

from invgates import cli
from invgates.robustness import SweepResult


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def summary(path):
    return {r["quantity"]: r["value"] for r in read_csv(path)}


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def test_synth_hadamard(tmp_path, capsys):
    assert run(tmp_path, "synth", "--gate", "hadamard", "--tau", "1", "--varphi", "linear") == 0
    rows = read_csv(tmp_path / "hamiltonian.csv")
    assert list(rows[0]) == ["s", "omega_x", "omega_y", "omega_z"]
    assert len(rows) == 101
    for r in rows:
        assert float(r["omega_x"]) == pytest.approx(math.pi / math.sqrt(2), abs=1e-12)
        assert float(r["omega_z"]) == pytest.approx(math.pi / math.sqrt(2), abs=1e-12)
        assert float(r["omega_y"]) == 0.0
    s = summary(tmp_path / "synth_summary.csv")
    assert s["gate"] == "HADAMARD" and float(s["max_abs_omega"]) == pytest.approx(math.pi / math.sqrt(2))
    assert "HADAMARD" in capsys.readouterr().out


def test_synth_phase_zero(tmp_path):
    assert run(tmp_path, "synth", "--gate", "phase", "--xi", "0") == 0
    for r in read_csv(tmp_path / "hamiltonian.csv"):
        assert all(float(r[k]) == 0.0 for k in ("omega_x", "omega_y", "omega_z"))


def test_synth_cz(tmp_path):
    assert run(tmp_path, "synth", "--gate", "cz", "--xi", "3.14159265", "--tau", "1") == 0
    rows = read_csv(tmp_path / "hamiltonian.csv")
    assert len(rows[0]) == 16
    for r in rows:
        assert float(r["IZ"]) == pytest.approx(math.pi / 4, abs=1e-8)
        assert float(r["ZI"]) == pytest.approx(math.pi / 4, abs=1e-8)
        assert float(r["ZZ"]) == pytest.approx(-math.pi / 4, abs=1e-8)
        assert all(float(r[k]) == 0.0 for k in r if k not in ("s", "IZ", "ZI", "ZZ"))


@pytest.mark.parametrize("args", [("--gate", "hadamard"), ("--gate", "cz", "--xi", str(math.pi)), ("--gate", "t")])
def test_evolve_fidelity(tmp_path, args):
    assert run(tmp_path, "evolve", *args) == 0
    s = summary(tmp_path / "evolve_summary.csv")
    assert float(s["infidelity"]) <= 1e-9
    assert float(s["unitarity_defect"]) < 1e-11
    entries = read_csv(tmp_path / "unitary.csv")
    assert list(entries[0]) == ["row", "col", "real", "imag"]


def test_evolve_zero_hamiltonian_trajectory(tmp_path):
    assert run(tmp_path, "evolve", "--gate", "phase", "--xi", "0", "--trajectory", "--points", "11", "--steps", "1000") == 0
    u = np.zeros((2, 2), dtype=complex)
    for e in read_csv(tmp_path / "unitary.csv"):
        u[int(e["row"]), int(e["col"])] = float(e["real"]) + 1j * float(e["imag"])
    np.testing.assert_allclose(u, np.eye(2), atol=1e-15)
    traj = read_csv(tmp_path / "state_trajectory.csv")
    assert len(traj) == 11 and list(traj[0]) == ["s", "re_0", "im_0", "re_1", "im_1"]


def test_sensitivity_hadamard(tmp_path, capsys):
    assert run(tmp_path, "sensitivity", "--gate", "hadamard", "--epsilon-count", "5") == 0
    out = capsys.readouterr().out
    assert "q_s (general) = 0.5584251375" in out
    assert "corrected cos^2) = 0.5584251375" in out
    assert "printed cos^4) = 0.4334251375" in out
    s = summary(tmp_path / "sensitivity_summary.csv")
    assert float(s["closed_form_discrepancy"]) == pytest.approx(0.125, abs=1e-12)
    fid = read_csv(tmp_path / "fidelity.csv")
    assert [float(r["epsilon"]) for r in fid] == pytest.approx([-0.1, -0.05, 0.0, 0.05, 0.1], abs=1e-15)
    assert fid[0]["p_predicted"] == fid[-1]["p_predicted"]


def test_sensitivity_phase_gate(tmp_path, capsys):
    assert run(tmp_path, "sensitivity", "--gate", "s") == 0
    assert float(summary(tmp_path / "sensitivity_summary.csv")["q_s_general"]) == 0.0


def test_sweep_small(tmp_path, capsys):
    code = run(tmp_path, "sweep", "--schedules", "constant,cycloid", "--epsilon-count", "3", "--steps", "2000", "--points", "21")
    assert code == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert list(rows[0]) == ["schedule_name", "epsilon", "q_s", "p_predicted", "p_exact", "error"]
    assert len(rows) == 6
    const = [r for r in rows if r["schedule_name"] == "constant"]
    assert const[0]["p_predicted"] == const[2]["p_predicted"]
    assert float(const[1]["p_exact"]) == pytest.approx(1.0, abs=1e-12)
    traj = read_csv(tmp_path / "trajectories.csv")
    assert list(traj[0]) == ["schedule_name", "s", "theta", "omega_x", "omega_z"]
    assert len(traj) == 42
    assert "cycloid: q_s = 0.16501770" in capsys.readouterr().out


def test_sweep_epsilon_zero(tmp_path):
    assert run(tmp_path, "sweep", "--epsilon-min", "0", "--epsilon-max", "0", "--epsilon-count", "1") == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert len(rows) == 5
    assert all(float(r["p_predicted"]) == 1.0 for r in rows)
    assert all(float(r["p_exact"]) == pytest.approx(1.0, abs=1e-11) for r in rows)


def test_sweep_deterministic(tmp_path):
    args = ("sweep", "--schedules", "linear,trigonometric", "--epsilon-count", "3", "--steps", "500")
    assert cli.main([*args, "--out", str(tmp_path / "a")]) == 0
    assert cli.main([*args, "--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    for name in ("sweep.csv", "trajectories.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_custom_schedule_from_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"theta_schedules": {"mine": {"kind": "tabulated", "nodes": [0, 0.5, 1], "values": [0, 0.2, math.pi / 4]}},
                               "epsilon_count": 3, "steps": 500}))
    assert cli.main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert {r["schedule_name"] for r in read_csv(tmp_path / "o" / "sweep.csv")} == {"mine"}


def test_sweep_all_failed_exits_two(tmp_path, monkeypatch):
    failed = SweepResult(
        [{"schedule_name": "constant", "epsilon": 0.0, "q_s": math.nan, "p_predicted": math.nan, "p_exact": math.nan, "error": "boom"}],
        [], {"constant": math.nan}, {"constant": "boom"},
    )
    monkeypatch.setattr(cli, "robustness_sweep", lambda *a, **k: failed)
    assert run(tmp_path, "sweep", "--schedules", "constant", "--epsilon-count", "1", "--epsilon-min", "0", "--epsilon-max", "0") == 2
    assert read_csv(tmp_path / "sweep.csv")[0]["error"] == "boom"


@pytest.mark.parametrize(
    "args",
    [
        ("synth", "--gate", "bogus"),
        ("synth", "--gate", "hadamard", "--tau", "-1"),
        ("evolve", "--gate", "hadamard", "--steps", "10"),
        ("synth", "--gate", "hadamard", "--theta-schedule", '{"kind": "constant", "end_value": 0.3}'),
        ("sweep", "--epsilon-max", "0.5"),
        ("sweep", "--schedules", "nope"),
        ("sweep", "--gate", "s"),
        ("sensitivity", "--gate", "cz", "--xi", "1"),
        ("evolve", "--gate", "hadamard", "--input", "1,1"),
    ],
)
def test_config_errors_leave_no_output(tmp_path, args, capsys):
    out = tmp_path / "out"
    assert cli.main([*args, "--out", str(out)]) == 1
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["synth", "--no-such-flag"])
    assert info.value.code == 1


def test_force_allows_wide_grid(tmp_path):
    assert run(tmp_path, "sweep", "--schedules", "constant", "--epsilon-max", "0.3", "--epsilon-min", "0.3",
               "--epsilon-count", "1", "--steps", "500", "--force") == 0


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"gate": "cz", "xi": 1.0, "tau": 2.0, "points": 5}))
    assert cli.main(["synth", "--config", str(cfg), "--tau", "4", "--out", str(tmp_path / "o")]) == 0
    s = summary(tmp_path / "o" / "synth_summary.csv")
    assert s["gate"] == "CZ" and float(s["tau"]) == 4.0 and float(s["xi"]) == 1.0
    rows = read_csv(tmp_path / "o" / "hamiltonian.csv")
    assert len(rows) == 5
    assert float(rows[0]["ZZ"]) == pytest.approx(-1.0 / 16)


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"gaet": "s"}')
    assert cli.main(["synth", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert not (tmp_path / "o").exists()
