"""
Drive Hamiltonians for the S, T, Hadamard and CZ gates
=====================================================

Pick the angles of the evolution operator, read off the Hamiltonian.
"""
import math

import numpy as np

from invgates import Schedule, SingleQubitParams, make_preset, omega_closed_form, synthesize_numeric, u1_at

# Hadamard: theta fixed at pi/4 and the relative phase varphi swept linearly to pi.
# The drive comes out constant, omega_x = omega_z = pi / sqrt(2).
h = make_preset("hadamard")
print("Hadamard omega_x, omega_y, omega_z:", [float(w) for w in h.hamiltonian()(0.5).omega])
print("pi / sqrt(2) =", math.pi / math.sqrt(2))

# The same numbers from a finite-difference derivative of U(s): i dU/dt U^dagger.
numeric = synthesize_numeric(lambda x: u1_at(h.params, x), 0.5, h.params.tau)
print("finite differences:", numeric.omega)

# Swap the constant theta for a smooth ramp and the drive becomes time dependent.
ramp = SingleQubitParams(Schedule.trigonometric(math.pi / 4), Schedule.linear(math.pi))
for si in (0.1, 0.5, 0.9):
    print(f"ramped theta, s = {si}: omega =", np.round(omega_closed_form(ramp, si).omega, 4))

# Phase gates only need a z field, xi / tau in total.
for name in ("S", "T", "Z"):
    p = make_preset(name)
    print(name, "omega_z =", p.hamiltonian()(0.5).omega[2], "xi =", p.xi)

# CZ: three constant couplings on IZ, ZI and ZZ.
cz = make_preset("CZ", xi=math.pi)
print("CZ couplings:", {k: round(float(v), 6) for k, v in cz.hamiltonian()(0.5).as_dict().items() if abs(v) > 0})
