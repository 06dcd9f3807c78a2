"""Realistic-noise simulation: thermal position sampling, Doppler-shifted
Rabi phases, interaction drift, pulse edges, laser phase noise, and
Rydberg decay via Monte-Carlo wavefunction or non-Hermitian propagation.

Geometry: the excitation beams counter-propagate along x, the two qubits
sit nominally at (0,0,0) and (0,0,L).  All noisy propagation runs in the
two-atom product basis with a per-atom level set {0,1,r[,d,s],a}; |a> is
the decay sink.  Drift branches use the worst-case rms speeds, either
along the beams (maximal Doppler dephasing) or along the trap axis
(maximal interaction variation).
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import constants as cn
from .design_u2 import pedersen_error
from .model import LaserParams, LeakageSpec, h_single, h_v1
from .qmath import propagate_const

DOPPLER_BRANCHES = ("doppler_pp", "doppler_pm", "doppler_mp", "doppler_mm")
VDW_BRANCHES = ("vdw_approach", "vdw_depart")
ALL_BRANCHES = DOPPLER_BRANCHES + VDW_BRANCHES

_BRANCH_SIGNS = {
    "doppler_pp": ((1, 1), "x"), "doppler_pm": ((1, -1), "x"),
    "doppler_mp": ((-1, 1), "x"), "doppler_mm": ((-1, -1), "x"),
    "vdw_approach": ((1, -1), "z"), "vdw_depart": ((-1, 1), "z"),
}


def branches_for_mode(drift_mode):
    if drift_mode == "doppler_max":
        return DOPPLER_BRANCHES
    if drift_mode == "vdw_max":
        return VDW_BRANCHES
    if drift_mode in (None, "all"):
        return ALL_BRANCHES
    if drift_mode in _BRANCH_SIGNS:
        return (drift_mode,)
    raise ValueError(f"unknown drift mode {drift_mode!r}")


@dataclass(frozen=True)
class TrapConfig:
    """Gaussian optical tweezer: waist and wavelength in um, depth in K."""

    waist: float = 3.0
    wavelength: float = 1.1
    depth_k: float = 20e-3

    @property
    def anisotropy(self):
        """sigma_x / sigma_y = sqrt(2) pi w / lambda."""
        return np.sqrt(2.0) * np.pi * self.waist / self.wavelength

    def sigmas(self, temperature):
        """(sigma_x, sigma_y, sigma_z) in um at atom temperature (K)."""
        sig_y = 0.5 * self.waist * np.sqrt(temperature / self.depth_k)
        return np.array([self.anisotropy * sig_y, sig_y, sig_y])


@dataclass(frozen=True)
class PhaseNoiseSpec:
    """Discrete laser phase-noise spectrum: S_nu(f) table in Hz^2/Hz."""

    freqs_hz: tuple
    psd: tuple

    def __post_init__(self):
        if any(f <= 0 for f in self.freqs_hz):
            raise ValueError("phase-noise frequencies must be positive")
        if len(self.freqs_hz) != len(self.psd):
            raise ValueError("frequency and PSD tables differ in length")

    def analytic_mean_square(self, t_g):
        """Expectation of phi(t)^2 over random phases: sum 2 S/(f^2 t_g)."""
        f = np.asarray(self.freqs_hz)
        s = np.asarray(self.psd)
        return float(np.sum(2.0 * s / (f**2 * t_g)))


ENHANCED_PHASE_NOISE = PhaseNoiseSpec(
    freqs_hz=tuple(f * 1e6 for f in
                   (0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 1.1, 1.2)),
    psd=tuple(100.0 * s for s in (3, 15, 25, 45, 70, 70, 10, 4)))


def phase_noise_waveform(t, spec, phases, t_g):
    """phi(t) = 2 sum_f sqrt(S(f)/t_g) cos(2 pi f t + phi_f) / f."""
    t = np.asarray(t, dtype=float)
    f = np.asarray(spec.freqs_hz)
    s = np.asarray(spec.psd)
    amp = 2.0 * np.sqrt(s / t_g) / f
    return np.tensordot(np.cos(2.0 * np.pi * np.outer(t, f) + phases),
                        amp, axes=(-1, 0)) if t.ndim else float(
        np.sum(amp * np.cos(2.0 * np.pi * f * t + phases)))


def pulse_envelope(t, t_g, t_edge):
    """Trapezoidal amplitude scale: linear edges of width t_edge."""
    if t_edge < 0 or 2.0 * t_edge > t_g:
        raise ValueError("edges must satisfy 0 <= 2 T_edge <= t_g")
    t = np.asarray(t, dtype=float)
    if t_edge == 0.0:
        return np.where((t >= 0) & (t <= t_g), 1.0, 0.0)
    up = np.clip(t / t_edge, 0.0, 1.0)
    down = np.clip((t_g - t) / t_edge, 0.0, 1.0)
    return np.minimum(up, down) * ((t >= 0) & (t <= t_g))


@dataclass(frozen=True)
class NoiseScenario:
    """Everything the noisy simulations need beyond the gate design."""

    trap: TrapConfig = TrapConfig()
    temperature: float = 1e-6            # K
    drift_mode: str = "all"
    lifetime: float = 1.2e-3             # s; None disables decay
    lambda1_um: float = 0.795
    lambda2_um: float = 0.474
    phase_noise: PhaseNoiseSpec = None
    phase_noise_copies: int = 1          # independent waveforms summed
    edge_time: float = 0.0               # s, trapezoidal pulse edges
    leak: LeakageSpec = None
    c6: float = None                     # rad/s um^6
    spacing: float = 16.5                # um
    seed: int = 2024
    mass_kg: float = cn.MASS_RB87

    @property
    def k_eff(self):
        """Two-photon wavevector mismatch k1 - k2 along the beams, rad/um."""
        return 2.0 * np.pi * (1.0 / self.lambda1_um - 1.0 / self.lambda2_um)

    @property
    def rms_speed(self):
        """One-axis rms thermal speed sqrt(kB T / m), um/s."""
        return np.sqrt(cn.K_B * self.temperature / self.mass_kg) * 1e6

    def interaction_at(self, separation_um):
        if self.c6 is None:
            raise ValueError("scenario has no C6 coefficient")
        return self.c6 / separation_um**6

    @classmethod
    def for_design(cls, design, c6, **overrides):
        """Scenario whose nominal spacing reproduces the design's V from
        the given C6 (rad/s um^6), so the zero-noise limit is the design
        point itself."""
        v = design.interaction.v
        if c6 * v <= 0:
            raise ValueError("C6 and the design interaction differ in sign")
        spacing = float((c6 / v) ** (1.0 / 6.0))
        return cls(c6=c6, spacing=spacing, **overrides)


def sample_positions(trap, temperature, rng, spacing=0.0):
    """Thermal positions (um) of the two atoms, separation axis z."""
    sig = trap.sigmas(temperature)
    pos_c = rng.normal(0.0, sig)
    pos_t = rng.normal(0.0, sig) + np.array([0.0, 0.0, spacing])
    return pos_c, pos_t


def doppler_phase(t, scenario, x0_um, vx_um_per_s):
    """Rabi phase (k1 - k2)(x0 + v t) of one atom drifting along the beams."""
    return scenario.k_eff * (x0_um + vx_um_per_s * np.asarray(t))


def branch_velocities(scenario, branch):
    """Velocity vectors (um/s) of the two atoms for a worst-case branch."""
    (s_c, s_t), axis = _BRANCH_SIGNS[branch]
    v = scenario.rms_speed
    unit = np.array([1.0, 0.0, 0.0]) if axis == "x" else \
        np.array([0.0, 0.0, 1.0])
    return s_c * v * unit, s_t * v * unit


# Two-atom schedule engine ---------------------------------------------

def _embed(op1, atom, n_levels):
    eye = np.eye(n_levels)
    return np.kron(op1, eye) if atom == 0 else np.kron(eye, op1)


@dataclass
class PairSchedule:
    """Time-dependent two-atom Hamiltonian decomposed for fast stepping.

    H(t) = static + env(t) sum_k [cos(theta_k) A_k + sin(theta_k) B_k]
           + v(t) P_rr,   theta_k = Doppler + common phase noise.
    """

    n_levels: int
    static: np.ndarray
    coupling_re: tuple       # windowed (A_c, A_t)
    coupling_im: tuple       # windowed (B_c, B_t)
    proj_rr: np.ndarray
    t_g: float
    theta_funcs: tuple       # per atom: t -> rad
    env_func: object         # t -> scale
    v_func: object           # t -> rad/s
    decay_diag: np.ndarray   # per-basis-state rate, 1/s
    labels: tuple
    noise_fmax: float = 0.0

    @property
    def dim(self):
        return self.n_levels ** 2

    def default_steps(self):
        """Step count adapted to the fastest time dependence present."""
        n = 256
        if any(self.theta_funcs[k](self.t_g) != self.theta_funcs[k](0.0)
               for k in range(2)):
            n = max(n, 1024)
        if getattr(self.env_func, "has_edges", False):
            n = max(n, 4096)
        if self.noise_fmax > 0:
            n = max(n, int(np.ceil(self.t_g * self.noise_fmax * 500)))
        return n


def build_pair_schedule(design, scenario, branch, pos_c=None, pos_t=None,
                        noise_phases=None, with_sink=False):
    """Assemble the stepping structure for one noisy realization.

    ``design`` may be a single-pulse or two-pulse design; the single-pulse
    case drives both atoms with the same laser for the full gate time.
    Positions default to the nominal trap centers.
    """
    if pos_c is None:
        pos_c = np.zeros(3)
    if pos_t is None:
        pos_t = np.array([0.0, 0.0, scenario.spacing])
    leak_on = scenario.leak is not None and (
        abs(scenario.leak.omega_d) > 0 or abs(scenario.leak.omega_s) > 0)
    if leak_on:
        n_levels, labels = 6, cn.ATOM_LEVELS
    elif with_sink or scenario.lifetime is not None:
        n_levels, labels = 4, ("0", "1", "r", "a")
    else:
        n_levels, labels = 3, ("0", "1", "r")

    if hasattr(design, "laser_c"):
        if scenario.edge_time > 0.0:
            raise ValueError("pulse edges are only modeled for the "
                             "single-pulse gate")
        lasers = (design.laser_c, design.laser_t)
        durations = (design.t_c, design.t_t)
        t_g = max(durations)
    else:
        lasers = (design.laser, design.laser)
        durations = (design.t_g, design.t_g)
        t_g = design.t_g

    lvl = {name: i for i, name in enumerate(labels)}
    static = np.zeros((n_levels**2, n_levels**2), dtype=complex)
    re_ops, im_ops = [], []
    for k, laser in enumerate(lasers):
        h_re = np.zeros((n_levels, n_levels), dtype=complex)
        h_re[lvl["r"], lvl["1"]] = abs(laser.rabi) / 2.0
        diag = np.zeros((n_levels, n_levels), dtype=complex)
        diag[lvl["r"], lvl["r"]] = laser.detuning
        if leak_on:
            h_re[lvl["d"], lvl["1"]] = abs(scenario.leak.omega_d) / 2.0
            h_re[lvl["s"], lvl["0"]] = abs(scenario.leak.omega_s) / 2.0
            diag[lvl["d"], lvl["d"]] = scenario.leak.delta_d
            diag[lvl["s"], lvl["s"]] = scenario.leak.delta_s
        h_im = -1j * (h_re - h_re.T)
        h_re = h_re + h_re.T.conj()
        static += _embed(diag, k, n_levels)
        gate_on = _GateWindow(durations[k])
        re_ops.append(_WindowedOp(_embed(h_re, k, n_levels), gate_on))
        im_ops.append(_WindowedOp(_embed(h_im, k, n_levels), gate_on))

    rr = lvl["r"] * n_levels + lvl["r"]
    proj_rr = np.zeros((n_levels**2, n_levels**2))
    proj_rr[rr, rr] = 1.0

    base_phase = [scenario.k_eff * pos_c[0], scenario.k_eff * pos_t[0]]
    v_c, v_t = (np.zeros(3), np.zeros(3)) if branch is None else \
        branch_velocities(scenario, branch)
    vel = [v_c, v_t]
    spec = scenario.phase_noise
    if spec is not None:
        if noise_phases is None:
            raise ValueError("phase-noise spectrum set but no phases given")
        noise_phases = np.atleast_2d(noise_phases)
        if noise_phases.shape != (scenario.phase_noise_copies,
                                  len(spec.freqs_hz)):
            raise ValueError("noise phases must have shape (copies, n_freq)")

    def make_theta(k):
        x0 = base_phase[k]
        vx = scenario.k_eff * vel[k][0]
        if spec is None:
            return lambda t: x0 + vx * t

        def theta(t):
            w = sum(phase_noise_waveform(t, spec, row, t_g)
                    for row in noise_phases)
            return x0 + vx * t + w
        return theta

    if scenario.c6 is not None:
        rel0 = pos_t - pos_c
        dvel = (v_t - v_c) * 1.0

        def v_func(t):
            r = rel0 + dvel * t
            return scenario.c6 / float(r @ r) ** 3
    else:
        v_static = design.interaction.v

        def v_func(t):
            return v_static

    env_func = _Envelope(t_g, scenario.edge_time)
    rates = np.zeros(n_levels)
    if scenario.lifetime is not None:
        for name in ("r", "d", "s"):
            if name in lvl:
                rates[lvl[name]] = 1.0 / scenario.lifetime
    decay_diag = (np.kron(rates, np.ones(n_levels))
                  + np.kron(np.ones(n_levels), rates))

    return PairSchedule(
        n_levels=n_levels, static=static,
        coupling_re=tuple(re_ops), coupling_im=tuple(im_ops),
        proj_rr=proj_rr, t_g=t_g,
        theta_funcs=(make_theta(0), make_theta(1)),
        env_func=env_func, v_func=v_func, decay_diag=decay_diag,
        labels=tuple(a + b for a in labels for b in labels),
        noise_fmax=max(spec.freqs_hz) if spec is not None else 0.0)


class _GateWindow:
    def __init__(self, duration):
        self.duration = duration

    def __call__(self, t):
        return 1.0 if 0.0 <= t <= self.duration else 0.0


class _WindowedOp:
    """Coupling operator that switches off when its pulse has ended."""

    def __init__(self, op, window):
        self.op = op
        self.window = window

    def at(self, t):
        w = self.window(t)
        return self.op * w if w != 1.0 else self.op


class _Envelope:
    def __init__(self, t_g, t_edge):
        self.t_g = t_g
        self.t_edge = t_edge
        self.has_edges = t_edge > 0.0

    def __call__(self, t):
        if not self.has_edges:
            return 1.0
        return float(pulse_envelope(t, self.t_g, self.t_edge))


def _schedule_h(sched, t):
    env = sched.env_func(t)
    h = sched.static + sched.v_func(t) * sched.proj_rr
    for k in range(2):
        op_re = sched.coupling_re[k].at(t)
        op_im = sched.coupling_im[k].at(t)
        th = sched.theta_funcs[k](t)
        h = h + env * (np.cos(th) * op_re + np.sin(th) * op_im)
    return h


def evolve_lossy(sched, psi_cols, n_steps=None):
    """Propagate columns through the schedule with decay as norm loss.

    Midpoint-exponential Hermitian steps with a symmetric diagonal decay
    split; no renormalization, so the squared norm deficit is the loss.
    """
    if n_steps is None:
        n_steps = sched.default_steps()
    dt = sched.t_g / n_steps
    psi = np.array(psi_cols, dtype=complex)
    decay_half = np.exp(-0.5 * sched.decay_diag * dt / 2.0)
    apply_decay = np.any(sched.decay_diag > 0)
    for i in range(n_steps):
        t_mid = (i + 0.5) * dt
        if apply_decay:
            psi = (psi.T * decay_half).T
        h = _schedule_h(sched, t_mid)
        values, vectors = np.linalg.eigh(h)
        amps = vectors.conj().T @ psi
        psi = vectors @ (np.exp(-1j * values * dt)[:, None] * amps)
        if apply_decay:
            psi = (psi.T * decay_half).T
    return psi


def _comp_indices(sched):
    order = ("00", "01", "10", "11")
    return [sched.labels.index(s) for s in order]


def _input_vector(sched, label):
    psi = np.zeros(sched.dim, dtype=complex)
    psi[sched.labels.index(label)] = 1.0
    return psi


def nonhermitian_loss(scenario, design, input_label, n_steps=None,
                      branch=None, pos_c=None, pos_t=None):
    """Deterministic population-loss estimate for one input state."""
    sched = build_pair_schedule(design, scenario, branch, pos_c, pos_t)
    psi = evolve_lossy(sched, _input_vector(sched, input_label)[:, None],
                       n_steps)
    return float(1.0 - np.linalg.norm(psi[:, 0]) ** 2)


def average_decay_loss(scenario, design, n_steps=None):
    """Mean loss over the four computational inputs (|00> never decays)."""
    sched = build_pair_schedule(design, scenario, None)
    cols = np.stack([_input_vector(sched, s)
                     for s in ("01", "10", "11")], axis=1)
    out = evolve_lossy(sched, cols, n_steps)
    losses = 1.0 - np.linalg.norm(out, axis=0) ** 2
    return float(np.sum(losses) / 4.0)


# Monte-Carlo wavefunction ---------------------------------------------

@dataclass
class TrajectoryOutcome:
    """One stochastic trajectory: final state, jumps, and the complex
    overlap of the (normalized) final state with the input state."""

    final_state: np.ndarray
    labels: tuple
    jumps: list
    input_overlap: complex

    @property
    def jumped(self):
        return len(self.jumps) > 0


def _jump_operators(sched):
    ops = []
    n = sched.n_levels
    labels1 = ("0", "1", "r", "d", "s", "a")[:n] if n != 4 else \
        ("0", "1", "r", "a")
    lvl = {name: i for i, name in enumerate(labels1)}
    for name in ("r", "d", "s"):
        if name not in lvl:
            continue
        g1 = np.zeros((n, n))
        g1[lvl["a"], lvl[name]] = 1.0
        for atom in range(2):
            ops.append(_embed(g1, atom, n))
    return ops


def mcwf_trajectory(scenario, design, input_label, rng, n_steps=None):
    """First-order Monte-Carlo wavefunction trajectory.

    Waiting-time formulation: draw a uniform u, evolve with the decay
    included as norm loss, and when the squared norm first drops below u
    project onto a jump channel chosen proportionally to its rate.  A
    step losing more than 5% of the norm triggers automatic refinement.
    """
    if scenario.lifetime is None:
        raise ValueError("MCWF needs a finite lifetime")
    sched = build_pair_schedule(design, scenario, None, with_sink=True)
    if n_steps is None:
        n_steps = sched.default_steps()
    for _ in range(4):
        out = _mcwf_run(sched, scenario, input_label, rng, n_steps)
        if out is not None:
            return out
        n_steps *= 4
    raise RuntimeError("MCWF step refinement failed to converge")


def _mcwf_run(sched, scenario, input_label, rng, n_steps):
    dt = sched.t_g / n_steps
    decay_half = np.exp(-0.5 * sched.decay_diag * dt / 2.0)
    jump_ops = _jump_operators(sched)
    rate = 1.0 / scenario.lifetime
    psi = _input_vector(sched, input_label)
    jumps = []
    u = rng.random()
    norm_sq = 1.0
    for i in range(n_steps):
        t_mid = (i + 0.5) * dt
        h = _schedule_h(sched, t_mid)
        values, vectors = np.linalg.eigh(h)
        new = decay_half * (vectors @ (np.exp(-1j * values * dt)
                                       * (vectors.conj().T
                                          @ (decay_half * psi))))
        new_norm_sq = float(np.vdot(new, new).real)
        if norm_sq > 0 and new_norm_sq < 0.95 * norm_sq:
            return None
        if new_norm_sq < u:
            weights = np.array([rate * np.linalg.norm(g @ new) ** 2
                                for g in jump_ops])
            total = weights.sum()
            if total <= 0:
                psi = new
                norm_sq = new_norm_sq
                continue
            channel = int(rng.choice(len(jump_ops),
                                     p=weights / total))
            psi = jump_ops[channel] @ new
            psi = psi / np.linalg.norm(psi)
            jumps.append(((i + 1) * dt, channel))
            u = rng.random()
            norm_sq = 1.0
        else:
            psi = new
            norm_sq = new_norm_sq
    psi_out = psi / np.linalg.norm(psi)
    overlap = complex(np.vdot(_input_vector(sched, input_label), psi_out))
    return TrajectoryOutcome(final_state=psi_out, labels=sched.labels,
                             jumps=jumps, input_overlap=overlap)


def mcwf_mean_loss(scenario, design, input_label, n_traj, seed=None,
                   n_steps=None, block=1024):
    """Trajectory-averaged loss of computational population, with the
    standard error of the mean.

    Trajectories are batched: the step propagators depend only on the
    schedule, so they are built once and applied to a block of states,
    with per-column jump handling.  Blocks use counter-based RNG streams
    keyed by (seed, block index), so results do not depend on scheduling.
    """
    if seed is None:
        seed = scenario.seed
    sched = build_pair_schedule(design, scenario, None, with_sink=True)
    if n_steps is None:
        n_steps = sched.default_steps()
    dt = sched.t_g / n_steps
    decay_half = np.exp(-0.5 * sched.decay_diag * dt / 2.0)
    props = []
    for i in range(n_steps):
        h = _schedule_h(sched, (i + 0.5) * dt)
        values, vectors = np.linalg.eigh(h)
        u_h = (vectors * np.exp(-1j * values * dt)) @ vectors.conj().T
        props.append((decay_half[:, None] * u_h) * decay_half[None, :])
    jump_ops = _jump_operators(sched)
    comp = _comp_indices(sched)
    losses = []
    done = 0
    bi = 0
    while done < n_traj:
        n_b = min(block, n_traj - done)
        rng = np.random.Generator(np.random.Philox(key=[seed, bi]))
        psi = np.tile(_input_vector(sched, input_label)[:, None], (1, n_b))
        u = rng.random(n_b)
        for p in props:
            psi = p @ psi
            norms = np.einsum("ij,ij->j", psi.conj(), psi).real
            hit = np.nonzero(norms < u)[0]
            for col in hit:
                weights = np.array([np.linalg.norm(g @ psi[:, col]) ** 2
                                    for g in jump_ops])
                total = weights.sum()
                if total <= 0:
                    continue
                channel = rng.choice(len(jump_ops), p=weights / total)
                new = jump_ops[channel] @ psi[:, col]
                psi[:, col] = new / np.linalg.norm(new)
                u[col] = rng.random()
        norms = np.einsum("ij,ij->j", psi.conj(), psi).real
        p_comp = np.abs(psi[comp, :]) ** 2 / norms
        losses.append(1.0 - p_comp.sum(axis=0))
        done += n_b
        bi += 1
    losses = np.concatenate(losses)
    return float(losses.mean()), float(losses.std(ddof=1)
                                       / np.sqrt(losses.size))


# Pulse-edge compensation ----------------------------------------------

def _edged_loss_and_phases(design, duration, t_edge, n_ramp=160):
    """Average population loss and realized angles of the trapezoidal
    pulse: stepped ramps, exact flat top."""
    laser, inter = design.laser, design.interaction

    def run(h_builder, psi0):
        def h_at(t):
            return h_builder(pulse_envelope(t, duration, t_edge))
        psi = psi0
        dt = t_edge / n_ramp
        psi = _midpoint_steps(h_at, psi, 0.0, t_edge, dt)
        psi = propagate_const(h_builder(1.0), psi,
                              duration - 2.0 * t_edge)
        psi = _midpoint_steps(h_at, psi, duration - t_edge, duration, dt)
        return psi

    def h2(scale):
        return h_single(LaserParams(rabi=laser.rabi * scale,
                                    detuning=laser.detuning))

    def h3(scale):
        return h_v1(LaserParams(rabi=laser.rabi * scale,
                                detuning=laser.detuning), inter)

    a01 = run(h2, np.array([0, 1], complex))[1]
    a11 = run(h3, np.array([0, 0, 1], complex))[2]
    loss = (2.0 * (1.0 - abs(a01) ** 2) + (1.0 - abs(a11) ** 2)) / 4.0
    return float(loss), float(np.angle(a01)), float(np.angle(a11))


def _midpoint_steps(h_of_t, psi, t0, t1, dt):
    n = max(1, int(np.ceil((t1 - t0) / dt - 1e-12)))
    step = (t1 - t0) / n
    for i in range(n):
        h = h_of_t(t0 + (i + 0.5) * step)
        values, vectors = np.linalg.eigh(h)
        psi = vectors @ (np.exp(-1j * values * step)
                         * (vectors.conj().T @ psi))
    return psi


def optimize_pulse_duration(design, t_edge, n_ramp=400):
    """Duration compensating trapezoidal pulse edges.

    One-dimensional golden-section minimization of the average population
    loss over the four inputs, initialized at the square-pulse duration.
    Returns (t_op, loss, alpha, beta).
    """
    from scipy.optimize import minimize_scalar

    def loss_of(t):
        return _edged_loss_and_phases(design, t, t_edge, n_ramp)[0]

    res = minimize_scalar(loss_of, bounds=(design.t_g,
                                           design.t_g + 3.0 * t_edge),
                          method="bounded",
                          options={"xatol": 1e-13})
    t_op = float(res.x)
    loss, alpha, beta = _edged_loss_and_phases(design, t_op, t_edge,
                                               n_ramp)
    return t_op, loss, alpha, beta


# Gaussian-beam Rabi-frequency ratio -----------------------------------

def rabi_ratio_gaussian(pos_c, pos_t, radius=10.0, lambdas=(0.795, 0.474),
                        spacing=16.5, z_mode="rayleigh"):
    """|Omega_c| / |Omega_t| for two focused Gaussian beams.

    Both beams focus at (0, 0, L/2) with waist ``radius``.  ``z_mode``
    selects the axial length: "rayleigh" uses pi R^2 / lambda_k (the
    standard Rayleigh range); "as_printed" uses pi R^2 / lambda_k^2,
    which is dimensionally inconsistent but kept selectable for
    comparison.
    """
    pos_c = np.asarray(pos_c, dtype=float)
    pos_t = np.asarray(pos_t, dtype=float)
    ratio = 1.0
    for lam in lambdas:
        z_k = np.pi * radius**2 / (lam if z_mode == "rayleigh" else lam**2)
        zc = pos_c[2] - spacing / 2.0
        zt = pos_t[2] - spacing / 2.0
        rho_c = pos_c[0] ** 2 + pos_c[1] ** 2
        rho_t = pos_t[0] ** 2 + pos_t[1] ** 2
        ratio *= ((z_k**2 + zt**2) / (z_k**2 + zc**2)
                  * np.exp(z_k**2 / radius**2
                           * (rho_t / (z_k**2 + zt**2)
                              - rho_c / (z_k**2 + zc**2))))
    return float(ratio)


# Noisy gate fidelity ---------------------------------------------------

@dataclass(frozen=True)
class FidelityEstimate:
    mean_error: float
    ci_low: float
    ci_high: float
    n_samples: int
    per_branch: dict = field(default_factory=dict)
    ci_flagged: bool = False


def _gate_error_one(sched, target, n_steps=None):
    comp = _comp_indices(sched)
    cols = np.stack([_input_vector(sched, s)
                     for s in ("00", "01", "10", "11")], axis=1)
    out = evolve_lossy(sched, cols, n_steps)
    actual = out[comp, :]
    return max(pedersen_error(target, actual), 0.0)


def _u1_target(design):
    a, b = design.alpha_actual, design.beta_actual
    return np.diag([1.0, np.exp(1j * a), np.exp(1j * a),
                    np.exp(1j * b)]).astype(complex)


def _fidelity_sample_worker(args):
    (scenario, design, target, branches, idx, seed, n_steps) = args
    rng = np.random.Generator(np.random.Philox(key=[seed, idx]))
    pos_c, pos_t = sample_positions(scenario.trap, scenario.temperature,
                                    rng, scenario.spacing)
    noise_phases = None
    if scenario.phase_noise is not None:
        noise_phases = rng.uniform(
            0.0, 2.0 * np.pi, (scenario.phase_noise_copies,
                               len(scenario.phase_noise.freqs_hz)))
    errs = {}
    for branch in branches:
        sched = build_pair_schedule(design, scenario, branch, pos_c, pos_t,
                                    noise_phases)
        errs[branch] = _gate_error_one(sched, target, n_steps)
    return idx, errs


def noisy_gate_fidelity(scenario, design, n_samples, seed=None,
                        workers=1, n_steps=None, ci_tolerance=None,
                        bootstrap=400):
    """Monte-Carlo estimate of the gate error under the scenario's noise.

    For each sample, thermal positions (and phase-noise phases when the
    spectrum is set) are drawn from counter-based streams keyed by
    (seed, sample); every drift branch of the scenario's mode is evolved
    and the per-branch mean errors are averaged.  The 95% CI comes from a
    paired bootstrap over samples.
    """
    if seed is None:
        seed = scenario.seed
    branches = branches_for_mode(scenario.drift_mode)
    target = _u1_target(design) if not hasattr(design, "laser_c") else \
        design.u2_target()
    tasks = [(scenario, design, target, branches, i, seed, n_steps)
             for i in range(n_samples)]
    per_sample = np.zeros((n_samples, len(branches)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for idx, errs in pool.map(_fidelity_sample_worker, tasks,
                                      chunksize=4):
                per_sample[idx] = [errs[b] for b in branches]
    else:
        for task in tasks:
            idx, errs = _fidelity_sample_worker(task)
            per_sample[idx] = [errs[b] for b in branches]
    branch_means = per_sample.mean(axis=0)
    mean = float(branch_means.mean())
    rng = np.random.Generator(np.random.Philox(key=[seed, 2**62]))
    boots = np.empty(bootstrap)
    for b in range(bootstrap):
        pick = rng.integers(0, n_samples, n_samples)
        boots[b] = per_sample[pick].mean(axis=0).mean()
    ci_low, ci_high = np.percentile(boots, [2.5, 97.5])
    flagged = (ci_tolerance is not None
               and (ci_high - ci_low) > ci_tolerance)
    return FidelityEstimate(
        mean_error=mean, ci_low=float(ci_low), ci_high=float(ci_high),
        n_samples=n_samples,
        per_branch={b: float(m) for b, m in zip(branches, branch_means)},
        ci_flagged=flagged)


def quadrature_positions(trap, temperature, spacing):
    """The three-point x-offsets {(-sx,0,0),(0,0,0),(+sx,0,0)} per atom
    with Gaussian weights, enumerated as weighted position pairs."""
    sx = trap.sigmas(temperature)[0]
    offsets = np.array([-sx, 0.0, sx])
    weights = np.exp(-offsets**2 / (2.0 * sx**2))
    weights = weights / weights.sum()
    pairs = []
    for i, xc in enumerate(offsets):
        for j, xt in enumerate(offsets):
            pos_c = np.array([xc, 0.0, 0.0])
            pos_t = np.array([xt, 0.0, spacing])
            pairs.append((weights[i] * weights[j], pos_c, pos_t))
    return pairs


def _phase_noise_set_worker(args):
    (scenario, design, target, branches, pairs, idx, seed, n_steps) = args
    rng = np.random.Generator(np.random.Philox(key=[seed, idx]))
    phases = rng.uniform(0.0, 2.0 * np.pi,
                         (scenario.phase_noise_copies,
                          len(scenario.phase_noise.freqs_hz)))
    branch_err = np.zeros(len(branches))
    for bi, branch in enumerate(branches):
        acc = 0.0
        for w, pos_c, pos_t in pairs:
            sched = build_pair_schedule(design, scenario, branch,
                                        pos_c, pos_t, phases)
            acc += w * _gate_error_one(sched, target, n_steps)
        branch_err[bi] = acc
    return idx, branch_err


def phase_noise_gate_error(scenario, design, n_phase_sets, seed=None,
                           workers=1, n_steps=None, bootstrap=200):
    """Gate error under laser phase noise, averaged over random phase
    sets with the three-point position quadrature of the trap."""
    if scenario.phase_noise is None:
        raise ValueError("scenario has no phase-noise spectrum")
    if seed is None:
        seed = scenario.seed
    branches = branches_for_mode(scenario.drift_mode)
    target = _u1_target(design) if not hasattr(design, "laser_c") else \
        design.u2_target()
    pairs = quadrature_positions(scenario.trap, scenario.temperature,
                                 scenario.spacing)
    tasks = [(scenario, design, target, branches, pairs, i, seed, n_steps)
             for i in range(n_phase_sets)]
    per_set = np.zeros((n_phase_sets, len(branches)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for idx, errs in pool.map(_phase_noise_set_worker, tasks,
                                      chunksize=2):
                per_set[idx] = errs
    else:
        for task in tasks:
            idx, errs = _phase_noise_set_worker(task)
            per_set[idx] = errs
    mean = float(per_set.mean(axis=0).mean())
    rng = np.random.Generator(np.random.Philox(key=[seed, 2**62]))
    boots = np.empty(bootstrap)
    for b in range(bootstrap):
        pick = rng.integers(0, n_phase_sets, n_phase_sets)
        boots[b] = per_set[pick].mean(axis=0).mean()
    ci_low, ci_high = np.percentile(boots, [2.5, 97.5])
    return FidelityEstimate(
        mean_error=mean, ci_low=float(ci_low), ci_high=float(ci_high),
        n_samples=n_phase_sets,
        per_branch={b: float(per_set[:, i].mean())
                    for i, b in enumerate(branches)})


def temperature_sweep(scenario, design, temperatures, n_samples,
                      seed=None, workers=1, n_steps=None):
    """Fidelity-vs-temperature rows: one FidelityEstimate per T (K)."""
    rows = []
    for temp in temperatures:
        scen = replace(scenario, temperature=float(temp))
        est = noisy_gate_fidelity(scen, design, n_samples,
                                  seed=seed, workers=workers,
                                  n_steps=n_steps)
        rows.append((float(temp), est))
    return rows
