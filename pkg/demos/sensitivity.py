"""
How badly does a Rabi-frequency error hurt?
==========================================

With the x drive scaled by (1 + eps) the output overlap drops as 1 - eps^2 q_S.
"""
import math

from invgates import make_preset, propagate_perturbed, state_fidelity, u1_at
from invgates.robustness import sensitivity_case_one_closed, sensitivity_general

h = make_preset("hadamard")
q = sensitivity_general(h.params, (1, 0)).q_s
print("q_S for the Hadamard protocol:", q)
print("(8 + pi^2) / 32             :", (8 + math.pi**2) / 32)

# The closed form with cos^2 reproduces it; a cos^4 weight would give 0.4334 instead.
print("closed form:", sensitivity_case_one_closed(math.pi / 4, math.pi))
print("cos^4 variant:", sensitivity_case_one_closed(math.pi / 4, math.pi, printed=True))

# Compare against exact propagation with the error switched on.
target = u1_at(h.params, 1.0) @ [1, 0]
for eps in (0.02, 0.01, 0.005):
    p = state_fidelity(target, propagate_perturbed(h.hamiltonian(), eps, 1.0, 10_000, (1, 0)))
    print(f"eps = {eps}: (1 - P) / eps^2 = {(1 - p) / eps**2:.5f}")

# q_S is a property of the path, not of how fast it is traversed.
for tau in (0.1, 1.0, 10.0):
    print("tau =", tau, "q_S =", sensitivity_general(make_preset("hadamard", tau=tau).params).q_s)
