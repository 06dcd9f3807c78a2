"""One detuned pulse on both qubits: how the integer-resonance conditions
turn closed Rabi cycles into a diagonal entangling gate.

The |01> and |10> inputs undergo N generalized Rabi cycles and return
exactly; the |11> input sees three Stark-shifted frequencies which must
all complete an integer number of cycles in the same duration.  We walk
through the first catalogued operating point.
"""

import numpy as np

from rydgates import constants as cn
from rydgates.catalog import u1_case
from rydgates.design_u1 import resonance_residuals, stark_frequencies
from rydgates.model import h_single, h_v1
from rydgates.qmath import eig_numeric, propagate_const

design = u1_case(0)
print("operating point: Omega/2pi = 10 MHz, Delta/2pi = 19.252 MHz, "
      "V/2pi = -35.1818 MHz, N = 4")
print(f"gate time t_g = {design.t_g / cn.NS:.3f} ns")

# The two-level sector: one transition frequency, N cycles by design.
obar = design.laser.generalized_rabi
print(f"\ngeneralized Rabi frequency / 2pi = {cn.to_mhz(obar):.4f} MHz")
print(f"t_g * Omega_bar / 2pi = {design.t_g * obar / (2 * np.pi):.6f} "
      "cycles (= N)")

# The |11> sector: three Stark frequencies, integers up to residuals.
c = stark_frequencies(design.laser, design.interaction)
cycles = design.t_g * c / (2 * np.pi)
print(f"\n|11> sector cycle counts: {np.round(cycles, 6)}")
print(f"rounded integers M = {design.m_integers}, "
      f"residuals = {np.array2string(resonance_residuals(design), precision=2)}")

# Propagate the inputs and read off the phases.
a01 = propagate_const(h_single(design.laser), np.array([0, 1], complex),
                      design.t_g)[1]
a11 = propagate_const(h_v1(design.laser, design.interaction),
                      np.array([0, 0, 1], complex), design.t_g)[2]
print(f"\n|01> return probability deficit: {1 - abs(a01)**2:.2e}")
print(f"|11> return probability deficit: {1 - abs(a11)**2:.2e}")
print(f"alpha/pi = {np.angle(a01) / np.pi:+.6f}, "
      f"beta/pi = {np.angle(a11) / np.pi:+.6f}")
print(f"entangling angle (beta - 2 alpha)/pi = "
      f"{design.beta_minus_2alpha / np.pi:.5f}")

# Population snapshots through the pulse for the |11> input.
es = eig_numeric(h_v1(design.laser, design.interaction))
amps = es.vectors.conj().T @ np.array([0, 0, 1], complex)
print("\n  t/t_g   P_rr     P_sym    P_11")
for frac in (0.0, 0.125, 0.25, 0.5, 0.75, 1.0):
    state = es.vectors @ (np.exp(-1j * es.values * frac * design.t_g)
                          * amps)
    pops = np.abs(state) ** 2
    print(f"  {frac:5.3f}  {pops[0]:.5f}  {pops[1]:.5f}  {pops[2]:.5f}")

print(f"\nintrinsic errors: rotation {design.e_ro:.2e}, "
      f"decay {design.e_de_tau / cn.NS:.1f} ns per unit lifetime")
