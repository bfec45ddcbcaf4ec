"""
Five ways to rotate theta from 0 to pi/4
=======================================

Compares constant, linear, quadratic, trigonometric and cycloid schedules for
the Hadamard protocol. Writes sweep.csv and trajectories.csv to the current
directory (same files as ``invgates sweep``).
"""
from invgates import robustness_sweep, solve_cycloid_ratio
from invgates.outputs import SWEEP_COLUMNS, TRAJECTORY_COLUMNS, write_csv

print("cycloid ratio r for theta(1) = pi/4:", solve_cycloid_ratio(0.7853981633974483))

result = robustness_sweep(epsilon_grid=[-0.1, -0.05, 0.0, 0.05, 0.1])
for name, q in sorted(result.q_values.items(), key=lambda kv: kv[1]):
    print(f"{name:14s} q_S = {q:.5f}")

# predicted versus exactly propagated overlap at the edge of the grid
for row in result.rows:
    if row["epsilon"] == 0.1:
        print(f"{row['schedule_name']:14s} P_pred = {row['p_predicted']:.6f}  P_exact = {row['p_exact']:.6f}")

write_csv("sweep.csv", SWEEP_COLUMNS, result.rows)
write_csv("trajectories.csv", TRAJECTORY_COLUMNS, result.trajectories)
