"""Realistic-noise study of the low-Rabi gate: Rydberg decay, thermal
position spread, worst-case Doppler drift, interaction variation, and
laser phase noise.

Writes plot-ready two-column data (temperature vs error) next to the
script.  Sample counts are kept small here; the acceptance suite runs
the full-size versions.
"""

import pathlib
from dataclasses import replace

import numpy as np

from rydgates import constants as cn
from rydgates.catalog import C6_MHZ_UM6, LIFETIME_S, scaled_design
from rydgates.noise import ENHANCED_PHASE_NOISE, NoiseScenario, \
    average_decay_loss, mcwf_mean_loss, phase_noise_gate_error, \
    temperature_sweep

design = scaled_design()
scenario = NoiseScenario.for_design(
    design, cn.mhz(C6_MHZ_UM6), temperature=1e-6, lifetime=LIFETIME_S,
    drift_mode="all", seed=12)
print(f"atom spacing for the design interaction: "
      f"{scenario.spacing:.3f} um")

# Decay alone: deterministic non-Hermitian estimate vs trajectories.
quiet = replace(scenario, temperature=0.0)
nh = average_decay_loss(quiet, design)
mc = sum(mcwf_mean_loss(quiet, design, s, 3000, seed=5)[0]
         for s in ("01", "10", "11")) / 4
print(f"\ndecay error: non-Hermitian {nh:.3e}, "
      f"trajectory average {mc:.3e} (lifetime {LIFETIME_S * 1e3:.1f} ms)")

# Error vs temperature with all six worst-case drift branches.
temps = [1e-6, 2e-6, 5e-6, 10e-6]
rows = temperature_sweep(scenario, design, temps, n_samples=24, seed=12)
print("\nerror vs atom temperature (24 position samples per point):")
for temp, est in rows:
    print(f"  {temp * 1e6:4.0f} uK: {est.mean_error:.3e} "
          f"[{est.ci_low:.3e}, {est.ci_high:.3e}]")
    for branch, err in est.per_branch.items():
        print(f"        {branch:13s} {err:.3e}")

out = pathlib.Path(__file__).with_name("error_vs_temperature.dat")
with open(out, "w") as fh:
    for temp, est in rows:
        fh.write(f"{temp * 1e6} {est.mean_error}\n")
print(f"wrote {out.name}")

# Laser phase noise dominates when enabled.
noisy = replace(scenario, phase_noise=ENHANCED_PHASE_NOISE,
                phase_noise_copies=2)
est = phase_noise_gate_error(noisy, design, 16, seed=12, n_steps=500)
print(f"\nwith the enhanced phase-noise spectrum (16 phase sets): "
      f"error = {est.mean_error:.3f} [{est.ci_low:.3f}, {est.ci_high:.3f}]")
print("(the full acceptance run uses 1000 phase sets)")
