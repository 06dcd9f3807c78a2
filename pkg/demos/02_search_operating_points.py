"""Finding operating points: coarse grid over (Delta, V), integer
rounding, then simplex refinement of the resonance residuals.

The search recovers the first catalogued single-pulse point to better
than 1e-4 MHz, and a seeded run of the two-pulse search lands on the
second catalog's first row.
"""

import numpy as np

from rydgates import constants as cn
from rydgates.design_u1 import design_row, resonance_residuals, search_u1
from rydgates.design_u2 import U2SearchConstraints, design_row_u2, \
    search_u2

print("single-pulse search near the first catalogued point")
designs = search_u1(cn.mhz(10.0), (cn.mhz(18.0), cn.mhz(21.0)),
                    (cn.mhz(-37.0), cn.mhz(-33.0)), n_max=4)
for d in designs:
    row = design_row(d)
    print(f"  N={row['N']} M=({row['M1']},{row['M2']},{row['M3']})  "
          f"Delta={row['delta_MHz']:.6f}  V={row['v_MHz']:.6f}  "
          f"t_g={row['tg_ns']:.2f} ns  E_ro={row['e_ro']:.1e}  "
          f"E_de={row['e_de_ns_per_tau']:.1f} ns/tau")
    print(f"  residuals: {np.array2string(resonance_residuals(d), precision=2)}")

print("\nwider scan (Delta in [-26, -21], V in [49, 55], N <= 10)")
wide = search_u1(cn.mhz(10.0), (cn.mhz(-26.0), cn.mhz(-21.0)),
                 (cn.mhz(49.0), cn.mhz(55.0)), n_max=10, n_min=8)
for d in wide:
    row = design_row(d)
    print(f"  N={row['N']} M=({row['M1']},{row['M2']},{row['M3']})  "
          f"Delta={row['delta_MHz']:.4f}  V={row['v_MHz']:.4f}  "
          f"E_de={row['e_de_ns_per_tau']:.1f} ns/tau")

print("\ntwo-pulse search seeded near the first two-pulse catalog row")
constraints = U2SearchConstraints(
    omega_c_range=(cn.mhz(5.0), cn.mhz(5.6)),
    delta_c_range=(cn.mhz(0.6), cn.mhz(1.0)),
    delta_t_range=(cn.mhz(3.0), cn.mhz(3.6)),
    v_range=(cn.mhz(-5.8), cn.mhz(-5.1)),
    n_c_range=(1, 1), n_t_range=(2, 2), target_sign=1,
    starts=((cn.mhz(5.31), cn.mhz(0.81), cn.mhz(3.33), cn.mhz(-5.44)),))
for d in search_u2(constraints):
    row = design_row_u2(d)
    print(f"  Nc={row['Nc']} Nt={row['Nt']}  "
          f"Omega_c={row['omega_c_MHz']:.6f}  "
          f"Delta_c={row['delta_c_MHz']:.6f}  "
          f"Delta_t={row['delta_t_MHz']:.6f}  V={row['v_MHz']:.6f}")
    print(f"  (t_c, t_t) = ({row['tc_ns']:.2f}, {row['tt_ns']:.2f}) ns, "
          f"phase excess/pi = "
          f"{row['beta_minus_alpha_minus_gamma_over_pi']:.6f}, "
          f"E_ro = {row['e_ro']:.2e}")
