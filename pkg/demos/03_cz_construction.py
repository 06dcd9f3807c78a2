"""Building a controlled-Z from the diagonal entangling gates.

The single-pulse gate needs either two or four applications depending on
the size of its entangling angle; the two-pulse gate with a pi/2 phase
excess needs just two applications and two phase gates.
"""

import numpy as np

from rydgates.catalog import u1_case, u2_case
from rydgates.synth import CZ, EYE2, Y_AXIS, compose_cz_u1, \
    compose_cz_u2, gate_distance, rotation_gate, solve_ab, u1_matrix

for index in (0, 1):
    d = u1_case(index)
    phi = d.beta_minus_2alpha
    cz, info = compose_cz_u1(d.u1_actual(), d.alpha_actual,
                             d.beta_actual, return_info=True)
    print(f"single-pulse case {index + 1}: (beta-2alpha)/pi = "
          f"{phi / np.pi:.5f} -> {info['route']} route")
    print(f"  distance to CZ with the propagated gate: "
          f"{gate_distance(cz, CZ):.2e}")
    ideal = compose_cz_u1(u1_matrix(d.alpha_actual, d.beta_actual),
                          d.alpha_actual, d.beta_actual)
    print(f"  distance with a formula-perfect gate:    "
          f"{gate_distance(ideal, CZ):.2e}")

# The four-pulse route's single-qubit gates for case 1
d = u1_case(0)
sol = solve_ab(d.alpha_actual, d.beta_actual)
print("\nfour-pulse route single-qubit data (case 1):")
print(f"  theta1 = {sol.theta1:.6f} rad (A = R_y(theta1))")
print(f"  theta2 = {sol.theta2:.6f}, theta3 = {sol.theta3:.6f} "
      "(B maps n12 back to z)")
print(f"  n2  = {np.round(sol.n2, 6)}")
print(f"  n12 = {np.round(sol.n12, 6)}")

# CNOT needs one extra pair of y-rotations on the target
cz1 = compose_cz_u1(d.u1_actual(), d.alpha_actual, d.beta_actual)
ry = rotation_gate(Y_AXIS, np.pi / 2)
cnot = np.kron(EYE2, ry) @ cz1 @ np.kron(EYE2, ry.conj().T)
target = np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                   [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
print(f"\nCNOT from the case-1 CZ plus y-rotations: distance "
      f"{gate_distance(cnot, target):.2e}")

print("\ntwo-pulse gates: CZ = [P(-2 alpha)]_c x [P(-2 gamma)]_t U^2")
for index in range(4):
    d = u2_case(index)
    cz = compose_cz_u2(d.u2_actual(), d.alpha, d.gamma)
    print(f"  case {index + 1}: phase excess/pi = "
          f"{d.beta_minus_alpha_minus_gamma / np.pi:.6f}, "
          f"distance to CZ = {gate_distance(cz, CZ):.2e}")
