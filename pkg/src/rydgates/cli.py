"""Command-line front door: searches, design analysis, controlled-Z
verification, noise sweeps, and catalog-reproduction checks, all driven
by JSON config files.

Conventions: frequencies in config files are MHz (divided-by-2-pi),
times ns, temperatures uK.  Every output directory receives a manifest
sufficient to re-run the command bit-identically.  Exit codes: 0 success,
1 check/fixture failure, 2 configuration error.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__, constants as cn
from . import catalog
from .design_u1 import design_from_mhz, designs_to_csv, design_row, \
    resonance_residuals, search_u1
from .design_u2 import U2SearchConstraints, design_row_u2, \
    design_u2_from_mhz, designs_to_csv_u2, search_u2
from .model import LeakageSpec
from .noise import ENHANCED_PHASE_NOISE, NoiseScenario, PhaseNoiseSpec, \
    TrapConfig, noisy_gate_fidelity, phase_noise_gate_error
from .synth import CZ, compose_cz_u1, compose_cz_u2, gate_distance

WORKERS_ENV = "RYDGATES_WORKERS"
CSV_SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


def _need(config, key, kind=None):
    if key not in config:
        raise ConfigError(f"missing config key: {key!r}")
    value = config[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"config key {key!r} has wrong type "
                          f"({type(value).__name__})")
    return value


def _load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ConfigError(f"malformed JSON in {path}: {err}")


def _write_manifest(out_dir, command, config, seed, workers, extra=None):
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "workers": workers,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "csv_schema_version": CSV_SCHEMA_VERSION,
    }
    if extra:
        manifest.update(extra)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return path


def design_from_config(block):
    """Build a U1 or U2 design from its JSON block."""
    kind = _need(block, "type", str)
    if kind == "u1":
        return design_from_mhz(_need(block, "omega_mhz"),
                               _need(block, "delta_mhz"),
                               _need(block, "v_mhz"),
                               int(_need(block, "n")),
                               tuple(block["m"]) if "m" in block else None)
    if kind == "u2":
        return design_u2_from_mhz(_need(block, "omega_c_mhz"),
                                  _need(block, "delta_c_mhz"),
                                  _need(block, "omega_t_mhz"),
                                  _need(block, "delta_t_mhz"),
                                  _need(block, "v_mhz"),
                                  int(_need(block, "n_c")),
                                  int(_need(block, "n_t")))
    raise ConfigError(f"unknown design type {kind!r}")


def scenario_from_config(block, design, seed):
    trap = TrapConfig(waist=block.get("trap_waist_um", 3.0),
                      wavelength=block.get("trap_wavelength_um", 1.1),
                      depth_k=block.get("trap_depth_mK", 20.0) * 1e-3)
    phase_noise = None
    copies = 1
    pn = block.get("phase_noise")
    if pn:
        copies = int(pn.get("copies", 1))
        if pn.get("enhanced", False):
            phase_noise = ENHANCED_PHASE_NOISE
        else:
            freqs = _need(pn, "freqs_mhz", list)
            phase_noise = PhaseNoiseSpec(
                freqs_hz=tuple(f * 1e6 for f in freqs),
                psd=tuple(_need(pn, "psd_hz2_per_hz", list)))
    leak = None
    lk = block.get("leak")
    if lk:
        leak = LeakageSpec.from_mhz(
            omega_d_mhz=lk.get("omega_d_mhz", 0.0),
            omega_s_mhz=lk.get("omega_s_mhz", 0.0),
            delta_d_mhz=lk.get("delta_d_mhz", 0.0),
            delta_s_mhz=lk.get("delta_s_mhz", 0.0))
    lifetime = block.get("lifetime_ms", 1.2)
    kwargs = dict(
        trap=trap,
        temperature=block.get("temperature_uK", 1.0) * cn.UK,
        drift_mode=block.get("drift_mode", "all"),
        lifetime=None if lifetime is None else lifetime * 1e-3,
        phase_noise=phase_noise, phase_noise_copies=copies,
        edge_time=block.get("edge_time_ns", 0.0) * cn.NS,
        leak=leak, seed=seed)
    c6 = block.get("c6_mhz_um6")
    if c6 is not None:
        return NoiseScenario.for_design(design, cn.mhz(c6), **kwargs)
    return NoiseScenario(spacing=block.get("spacing_um", 16.5), **kwargs)


def cmd_search_u1(config, out_dir, seed, workers):
    designs = search_u1(
        cn.mhz(_need(config, "omega_mhz")),
        tuple(cn.mhz(x) for x in _need(config, "delta_range_mhz", list)),
        tuple(cn.mhz(x) for x in _need(config, "v_range_mhz", list)),
        int(_need(config, "n_max")),
        e_ro_max=config.get("e_ro_max", 1e-7),
        e_de_max_tau=config.get("e_de_max_ns", 90.0) * cn.NS,
        grid_step=cn.mhz(config.get("grid_step_mhz", 0.05)),
        n_min=int(config.get("n_min", 1)))
    path = os.path.join(out_dir, "designs_u1.csv")
    designs_to_csv(designs, path)
    _write_manifest(out_dir, "search-u1", config, seed, workers,
                    {"n_designs": len(designs)})
    print(f"{len(designs)} designs -> {path}")
    return 0


def cmd_search_u2(config, out_dir, seed, workers):
    starts = config.get("starts_mhz")
    constraints = U2SearchConstraints(
        omega_c_range=tuple(cn.mhz(x) for x in
                            _need(config, "omega_c_range_mhz", list)),
        delta_c_range=tuple(cn.mhz(x) for x in
                            _need(config, "delta_c_range_mhz", list)),
        delta_t_range=tuple(cn.mhz(x) for x in
                            _need(config, "delta_t_range_mhz", list)),
        v_range=tuple(cn.mhz(x) for x in _need(config, "v_range_mhz",
                                               list)),
        n_c_range=tuple(config.get("n_c_range", (1, 2))),
        n_t_range=tuple(config.get("n_t_range", (1, 3))),
        omega_t_cap=cn.mhz(config.get("omega_t_cap_mhz", 10.0)),
        target_sign=int(config.get("target_sign", 1)),
        e_ro_max=config.get("e_ro_max", 1e-5),
        e_de_max_tau=config.get("e_de_max_ns", 150.0) * cn.NS,
        n_starts=int(config.get("n_starts", 32)),
        seed=seed,
        starts=tuple(tuple(cn.mhz(v) for v in s) for s in starts)
        if starts else None)
    designs = search_u2(constraints)
    path = os.path.join(out_dir, "designs_u2.csv")
    designs_to_csv_u2(designs, path)
    _write_manifest(out_dir, "search-u2", config, seed, workers,
                    {"n_designs": len(designs)})
    print(f"{len(designs)} designs -> {path}")
    return 0


def _print_matrix(m):
    for row in m:
        print("   ", "  ".join(f"{z.real:+.6f}{z.imag:+.6f}j"
                               for z in row))


def cmd_analyze(config, out_dir, seed, workers):
    design = design_from_config(_need(config, "design", dict))
    if hasattr(design, "laser_c"):
        print(f"two-pulse design: t_c = {design.t_c / cn.NS:.3f} ns, "
              f"t_t = {design.t_t / cn.NS:.3f} ns")
        print(f"alpha/pi = {design.alpha / np.pi:.7f}, "
              f"gamma/pi = {design.gamma / np.pi:.7f}, "
              f"beta/pi = {design.beta_actual / np.pi:.7f}")
        print(f"(beta-alpha-gamma)/pi mod 2 = "
              f"{design.beta_minus_alpha_minus_gamma / np.pi:.7f}")
        print(f"mid-pulse populations: rr = {design.p_rr_mid:.3e}, "
              f"control-excited = {design.p_ctrl_mid:.3e}")
        print(f"E_ro = {design.e_ro:.3e}, "
              f"E_de = {design.e_de_tau / cn.NS:.2f} ns/tau")
        print("projected gate action:")
        _print_matrix(design.u2_actual())
        row = design_row_u2(design)
    else:
        res = resonance_residuals(design)
        print(f"single-pulse design: N = {design.n_cycles}, "
              f"M = {design.m_integers}, t_g = {design.t_g / cn.NS:.3f} ns")
        print(f"residuals (cycles): {np.array2string(res, precision=3)}")
        print(f"alpha/pi = {design.alpha_actual / np.pi:.7f}, "
              f"beta/pi = {design.beta_actual / np.pi:.7f}, "
              f"(beta-2alpha)/pi = {design.beta_minus_2alpha / np.pi:.7f}")
        print(f"E_ro = {design.e_ro:.3e}, "
              f"E_de = {design.e_de_tau / cn.NS:.2f} ns/tau")
        print("projected gate action:")
        _print_matrix(design.u1_actual())
        row = design_row(design)
    if out_dir:
        with open(os.path.join(out_dir, "analysis.json"), "w") as fh:
            json.dump(row, fh, indent=2, sort_keys=True)
        _write_manifest(out_dir, "analyze", config, seed, workers)
    return 0


def cmd_cz_verify(config, out_dir, seed, workers):
    design = design_from_config(_need(config, "design", dict))
    if hasattr(design, "laser_c"):
        composite = compose_cz_u2(design.u2_actual(), design.alpha,
                                  design.gamma)
        info = {"route": "two-pulse-gate squared",
                "phase_gates": {"control": -2 * design.alpha / np.pi,
                                "target": -2 * design.gamma / np.pi}}
    else:
        composite, info = compose_cz_u1(
            design.u1_actual(), design.alpha_actual, design.beta_actual,
            return_info=True)
    dist = gate_distance(composite, CZ)
    print(f"composite distance to CZ (global-phase quotient): {dist:.3e}")
    print(f"construction: {json.dumps(info, default=float)}")
    tol = config.get("distance_tol", 1e-4)
    ok = dist <= tol
    print("PASS" if ok else "FAIL", f"(tolerance {tol})")
    if out_dir:
        with open(os.path.join(out_dir, "cz_verify.json"), "w") as fh:
            json.dump({"distance": dist, "tolerance": tol,
                       "passed": ok, "construction": info},
                      fh, indent=2, sort_keys=True, default=float)
        _write_manifest(out_dir, "cz-verify", config, seed, workers)
    return 0 if ok else 1


SWEEP_COLUMNS = ("T_a_uK", "drift_mode", "mean_error", "ci_low", "ci_high",
                 "n_traj")


def cmd_noise_sweep(config, out_dir, seed, workers):
    design = design_from_config(_need(config, "design", dict))
    scen_block = _need(config, "scenario", dict)
    temps = _need(config, "temperatures_uK", list)
    n_samples = int(_need(config, "n_samples"))
    rows = []
    for temp in temps:
        block = dict(scen_block, temperature_uK=temp)
        scenario = scenario_from_config(block, design, seed)
        if scenario.phase_noise is not None:
            est = phase_noise_gate_error(scenario, design, n_samples,
                                         seed=seed, workers=workers)
        else:
            est = noisy_gate_fidelity(scenario, design, n_samples,
                                      seed=seed, workers=workers)
        rows.append({"T_a_uK": temp,
                     "drift_mode": scenario.drift_mode,
                     "mean_error": est.mean_error,
                     "ci_low": est.ci_low, "ci_high": est.ci_high,
                     "n_traj": est.n_samples})
        print(f"T = {temp} uK: error = {est.mean_error:.4e} "
              f"[{est.ci_low:.4e}, {est.ci_high:.4e}]")
    csv_path = os.path.join(out_dir, "sweep.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    with open(os.path.join(out_dir, "error_vs_temperature.dat"), "w") as fh:
        for row in rows:
            fh.write(f"{row['T_a_uK']} {row['mean_error']}\n")
    _write_manifest(out_dir, "noise-sweep", config, seed, workers)
    print(f"-> {csv_path}")
    return 0


def cmd_table_repro(which, out_dir, seed, workers):
    rows = catalog.table_checks(which)
    n_fail = 0
    for label, ok, detail in rows:
        print(("PASS" if ok else "FAIL"), label, "--", detail)
        n_fail += 0 if ok else 1
    if out_dir:
        with open(os.path.join(out_dir, f"table{which}_repro.json"),
                  "w") as fh:
            json.dump([{"check": r[0], "passed": r[1], "detail": r[2]}
                       for r in rows], fh, indent=2)
        _write_manifest(out_dir, f"table-repro {which}", {}, seed, workers)
    print(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    return 1 if n_fail else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rydgates",
        description="Design and verify Rydberg entangling gates built on "
                    "detuned-Rabi interference")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=2024)
    common.add_argument("--workers", type=int,
                        default=int(os.environ.get(WORKERS_ENV, "1")))
    common.add_argument("--out", default=None,
                        help="output directory (created if missing)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("search-u1", "search-u2", "analyze", "cz-verify",
                 "noise-sweep"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--config", required=True)
    p = sub.add_parser("table-repro", parents=[common])
    p.add_argument("which", type=int, choices=(1, 2, 3))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    out_dir = args.out
    needs_out = args.command in ("search-u1", "search-u2", "noise-sweep")
    if out_dir is None and needs_out:
        out_dir = "."
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
    try:
        if args.command == "table-repro":
            return cmd_table_repro(args.which, out_dir, args.seed,
                                   args.workers)
        config = _load_config(args.config)
        handler = {"search-u1": cmd_search_u1,
                   "search-u2": cmd_search_u2,
                   "analyze": cmd_analyze,
                   "cz-verify": cmd_cz_verify,
                   "noise-sweep": cmd_noise_sweep}[args.command]
        return handler(config, out_dir, args.seed, args.workers)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
