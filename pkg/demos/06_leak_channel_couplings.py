"""Leakage channels: couplings to the nearby Rydberg levels from
angular-momentum algebra, and the resulting leak-error estimates.

The d- and s-channel couplings follow from Clebsch-Gordan and 6-j
chains through the intermediate hyperfine manifold; radial matrix
elements enter as configuration ratios.
"""

import numpy as np

from rydgates import constants as cn
from rydgates.atomic import ExcitationScheme, coupling_hierarchy, \
    leak_zetas
from rydgates.catalog import scaled_design
from rydgates.design_u1 import leakage_estimate

scheme = ExcitationScheme()
wd, w0, ws = coupling_hierarchy(scheme)
print("coupling hierarchy (relative units):")
print(f"  d-channel : {wd / w0:.4f}")
print(f"  principal : 1")
print(f"  s-channel : {ws / w0:.4f}")

print("\nselection-rule weights of the bright leak superpositions:")
print(f"  d: {np.round(leak_zetas(scheme, 'd'), 5)}")
print(f"  s: {np.round(leak_zetas(scheme, 's'), 5)}")

# Leak-error estimates for the low-Rabi gate: the pulse area is
# Omega t_g and the channels sit 1.6 GHz (d) and 520 MHz (s) away.
design = scaled_design()
area = abs(design.laser.rabi) * design.t_g
print(f"\npulse area Omega t_g = {area / np.pi:.3f} pi")
omega = abs(design.laser.rabi)
for name, coupling, detuning_mhz in (("d", 2.0 * omega, 1600.0),
                                     ("s", 0.84 * omega, 520.0)):
    est = leakage_estimate(coupling, cn.mhz(detuning_mhz),
                           coupling * design.t_g)
    x = coupling / np.hypot(coupling, cn.mhz(detuning_mhz))
    print(f"  {name}-channel: amplitude bound x^2 = {x**2:.2e}, "
          f"estimate [x sin(y/x)]^2 = {est:.2e}")

print("\nhalving the two-photon detuning strengthens every coupling:")
closer = ExcitationScheme(delta_2pho=cn.mhz(1000.0))
wd2, w02, ws2 = coupling_hierarchy(closer)
print(f"  principal coupling ratio (1 GHz vs 2 GHz): {w02 / w0:.3f}")
