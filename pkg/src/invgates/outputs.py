"""Flat CSV writers (header row, dot decimal, UTF-8, shortest round-trip floats)."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .pauli import PauliDecomposition

__all__ = [
    "format_value",
    "write_csv",
    "hamiltonian_rows",
    "write_hamiltonian_csv",
    "write_unitary_csv",
    "write_summary_csv",
    "SWEEP_COLUMNS",
    "TRAJECTORY_COLUMNS",
]

SWEEP_COLUMNS = ("schedule_name", "epsilon", "q_s", "p_predicted", "p_exact", "error")
TRAJECTORY_COLUMNS = ("schedule_name", "s", "theta", "omega_x", "omega_z")


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        # 0.0 and -0.0 print identically
        return repr(v + 0.0)
    return str(v)


def write_csv(path, columns: Sequence[str], rows: Iterable[Mapping]) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_value(row[c]) for c in columns])
    return path


def hamiltonian_rows(s, decomposition: PauliDecomposition) -> tuple[list[str], list[dict]]:
    """Columns and rows for a time-indexed Hamiltonian.

    One qubit: ``s, omega_x, omega_y, omega_z``. Two qubits: ``s`` plus the
    15 Pauli product coefficients (``H = sum c_P P``).
    """
    s = np.asarray(s, dtype=float)
    if decomposition.dimension == 2:
        cols = ["s", "omega_x", "omega_y", "omega_z"]
        data = [np.broadcast_to(w, s.shape) for w in decomposition.omega]
    else:
        cols = ["s"] + decomposition.labels
        data = [np.broadcast_to(decomposition[lab], s.shape) for lab in decomposition.labels]
    rows = [dict(zip(cols, (si, *(float(d[i]) for d in data)))) for i, si in enumerate(s)]
    return cols, rows


def write_hamiltonian_csv(path, s, decomposition: PauliDecomposition) -> Path:
    cols, rows = hamiltonian_rows(s, decomposition)
    return write_csv(path, cols, rows)


def write_unitary_csv(path, u) -> Path:
    u = np.asarray(u)
    rows = [
        {"row": i, "col": j, "real": float(u[i, j].real), "imag": float(u[i, j].imag)}
        for i in range(u.shape[0])
        for j in range(u.shape[1])
    ]
    return write_csv(path, ("row", "col", "real", "imag"), rows)


def write_summary_csv(path, items: Mapping[str, object]) -> Path:
    return write_csv(path, ("quantity", "value"), [{"quantity": k, "value": v} for k, v in items.items()])
