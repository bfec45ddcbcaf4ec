"""Pauli matrices and Hamiltonian decompositions in the Pauli product basis."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

__all__ = ["I2", "SX", "SY", "SZ", "PAULI", "pauli_labels", "pauli_matrix", "PauliDecomposition", "InvalidHamiltonianError"]

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
# sigma_z |0> = +|0>
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


class InvalidHamiltonianError(ValueError):
    pass


def pauli_labels(n_qubits: int) -> list[str]:
    """Traceless Pauli product labels, first character = first tensor factor."""
    labels = ["".join(p) for p in itertools.product("IXYZ", repeat=n_qubits)]
    return [lab for lab in labels if set(lab) != {"I"}]


def pauli_matrix(label: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, PAULI[ch])
    return out


_NQ = {2: 1, 4: 2}


@dataclass(frozen=True)
class PauliDecomposition:
    """Traceless Hamiltonian ``H = sum_P c_P P`` over Pauli products.

    ``coefficients`` holds the raw ``c_P`` (scalars or equally shaped arrays
    when the decomposition is time indexed). Labels not present are zero. For
    one qubit the drive vector with ``H = omega . sigma / 2`` is available as
    :attr:`omega`.
    """

    dimension: int
    coefficients: Mapping[str, object]

    def __post_init__(self):
        if self.dimension not in _NQ:
            raise ValueError(f"dimension must be 2 or 4, got {self.dimension}")
        valid = set(pauli_labels(_NQ[self.dimension]))
        bad = set(self.coefficients) - valid
        if bad:
            raise ValueError(f"invalid Pauli labels for dimension {self.dimension}: {sorted(bad)}")

    @classmethod
    def from_matrix(cls, h, hermitize: bool = True) -> PauliDecomposition:
        """Project a matrix (or stack of matrices) onto the traceless Pauli basis.

        The identity component is discarded. With ``hermitize`` the matrix is
        first replaced by ``(H + H^dagger) / 2``.
        """
        h = np.asarray(h, dtype=complex)
        d = h.shape[-1]
        if d not in _NQ:
            raise ValueError(f"dimension must be 2 or 4, got {d}")
        if hermitize:
            h = 0.5 * (h + np.conj(np.swapaxes(h, -1, -2)))
        coeffs = {}
        for lab in pauli_labels(_NQ[d]):
            p = pauli_matrix(lab)
            coeffs[lab] = np.real(np.einsum("ij,...ji->...", p, h)) / d
            if np.ndim(coeffs[lab]) == 0:
                coeffs[lab] = float(coeffs[lab])
        return cls(d, coeffs)

    @property
    def labels(self) -> list[str]:
        return pauli_labels(_NQ[self.dimension])

    def __getitem__(self, label: str):
        if label not in self.labels:
            raise KeyError(label)
        return self.coefficients.get(label, 0.0)

    def as_dict(self) -> dict[str, object]:
        return {lab: self[lab] for lab in self.labels}

    @property
    def omega(self) -> tuple:
        """``(omega_x, omega_y, omega_z) = 2 (c_X, c_Y, c_Z)`` for one qubit."""
        if self.dimension != 2:
            raise ValueError("omega is defined for single-qubit decompositions only")
        return tuple(2.0 * self[k] for k in "XYZ")

    def matrix(self) -> np.ndarray:
        """Reconstructed Hamiltonian, shape ``(..., d, d)``.

        Raises
        ------
        InvalidHamiltonianError
            If a coefficient carries an imaginary part (non-Hermitian operator).
        """
        shape = np.broadcast_shapes(*(np.shape(v) for v in self.coefficients.values())) if self.coefficients else ()
        out = np.zeros(shape + (self.dimension, self.dimension), dtype=complex)
        for lab, c in self.coefficients.items():
            c = np.asarray(c)
            if np.iscomplexobj(c):
                if np.any(np.abs(c.imag) > 1e-12):
                    raise InvalidHamiltonianError(f"coefficient {lab} is not real")
                c = c.real
            out = out + c[..., None, None] * pauli_matrix(lab)
        return out

    def scaled(self, factor: float) -> PauliDecomposition:
        return PauliDecomposition(self.dimension, {k: factor * np.asarray(v) for k, v in self.coefficients.items()})

    def max_abs(self) -> float:
        if not self.coefficients:
            return 0.0
        return float(max(np.max(np.abs(v)) for v in self.coefficients.values()))
