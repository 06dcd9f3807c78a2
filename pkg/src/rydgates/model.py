"""Hamiltonian builders for the single- and two-pulse blockade gates.

Each builder returns a dense complex Hermitian ndarray in the exact basis
ordering frozen in ``constants``.  Entries are angular frequencies (rad/s).
"""

from dataclasses import dataclass

import numpy as np

from . import constants as cn
from .qmath import assert_hermitian


@dataclass(frozen=True)
class LaserParams:
    """One laser coupling |1> <-> |r>: complex Rabi frequency and detuning."""

    rabi: complex       # rad/s, may carry an arbitrary phase
    detuning: float     # rad/s

    @classmethod
    def from_mhz(cls, rabi_mhz, detuning_mhz, phase=0.0):
        return cls(rabi=cn.mhz(rabi_mhz) * np.exp(1j * phase),
                   detuning=float(cn.mhz(detuning_mhz)))

    @property
    def rabi_mag(self):
        return abs(self.rabi)

    @property
    def generalized_rabi(self):
        """sqrt(|Omega|^2 + Delta^2), the detuned-cycle frequency."""
        return float(np.hypot(abs(self.rabi), self.detuning))

    def scaled(self, factor):
        return LaserParams(rabi=self.rabi * factor,
                           detuning=self.detuning * factor)


@dataclass(frozen=True)
class InteractionParams:
    """van der Waals shift of |rr>, optionally derived from C6 and spacing."""

    v: float                 # rad/s, signed
    c6: float = None         # rad/s * um^6
    spacing: float = None    # um

    def __post_init__(self):
        if self.c6 is not None and self.spacing is not None:
            v_from_c6 = self.c6 / self.spacing**6
            if abs(self.v - v_from_c6) > 1e-9 * max(abs(self.v), 1e-300):
                raise ValueError("v inconsistent with C6/spacing^6")

    @classmethod
    def from_mhz(cls, v_mhz):
        return cls(v=float(cn.mhz(v_mhz)))

    @classmethod
    def from_c6(cls, c6, spacing):
        return cls(v=c6 / spacing**6, c6=c6, spacing=spacing)


def h_single(laser):
    """2x2 Hamiltonian of one driven qubit, basis {|0r>, |01>}."""
    w, d = laser.rabi, laser.detuning
    return assert_hermitian(np.array([[d, w / 2.0],
                                      [np.conj(w) / 2.0, 0.0]], dtype=complex))


def h_v1(laser, inter):
    """3x3 |11>-sector Hamiltonian, basis {|rr>, (|1r>+|r1>)/sqrt2, |11>}."""
    w, d, v = laser.rabi, laser.detuning, inter.v
    s2 = np.sqrt(2.0)
    return assert_hermitian(np.array([
        [v + 2.0 * d, w / s2, 0.0],
        [np.conj(w) / s2, d, w / s2],
        [0.0, np.conj(w) / s2, 0.0],
    ], dtype=complex))


def h_v2(laser_c, laser_t, inter):
    """4x4 |11>-sector Hamiltonian with one laser per qubit.

    Basis {|rr>, |r1>, |1r>, |11>}, control slot first.
    """
    wc, dc = laser_c.rabi, laser_c.detuning
    wt, dt = laser_t.rabi, laser_t.detuning
    v = inter.v
    return assert_hermitian(np.array([
        [v + dc + dt, wt / 2.0, wc / 2.0, 0.0],
        [np.conj(wt) / 2.0, dc, 0.0, wc / 2.0],
        [np.conj(wc) / 2.0, 0.0, dt, wt / 2.0],
        [0.0, np.conj(wc) / 2.0, np.conj(wt) / 2.0, 0.0],
    ], dtype=complex))


def h_vt(laser_t, inter):
    """4x4 |11>-sector Hamiltonian when only the target laser is on."""
    wt, dt, v = laser_t.rabi, laser_t.detuning, inter.v
    return assert_hermitian(np.array([
        [v + dt, wt / 2.0, 0.0, 0.0],
        [np.conj(wt) / 2.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, dt, wt / 2.0],
        [0.0, 0.0, np.conj(wt) / 2.0, 0.0],
    ], dtype=complex))


def h_vc(laser_c, inter):
    """4x4 |11>-sector Hamiltonian when only the control laser is on."""
    wc, dc, v = laser_c.rabi, laser_c.detuning, inter.v
    return assert_hermitian(np.array([
        [v + dc, 0.0, wc / 2.0, 0.0],
        [0.0, dc, 0.0, wc / 2.0],
        [np.conj(wc) / 2.0, 0.0, 0.0, 0.0],
        [0.0, np.conj(wc) / 2.0, 0.0, 0.0],
    ], dtype=complex))


def h_vt_reduced(laser_t):
    """2x2 restriction of ``h_vt`` to {|1r>, |11>}."""
    wt, dt = laser_t.rabi, laser_t.detuning
    return assert_hermitian(np.array([[dt, wt / 2.0],
                                      [np.conj(wt) / 2.0, 0.0]],
                                     dtype=complex))


# Two-atom product-basis builders -------------------------------------

QUBIT_RYD_LEVELS = 3  # per-atom {|0>, |1>, |r>}


def _h_atom_qubit_ryd(laser):
    """Per-atom 3-level Hamiltonian on {|0>, |1>, |r>}."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 1] = laser.rabi / 2.0
    h[1, 2] = np.conj(laser.rabi) / 2.0
    h[2, 2] = laser.detuning
    return h


def h_two_atom(laser_c, laser_t, inter):
    """9x9 two-atom Hamiltonian on {|0>,|1>,|r>} x {|0>,|1>,|r>}.

    With equal lasers this is the full single-pulse gate Hamiltonian; its
    restrictions reproduce ``h_single`` and ``h_v1``.
    """
    eye = np.eye(3)
    h = (np.kron(_h_atom_qubit_ryd(laser_c), eye)
         + np.kron(eye, _h_atom_qubit_ryd(laser_t)))
    rr = 3 * 2 + 2
    h[rr, rr] += inter.v
    return assert_hermitian(h)


@dataclass(frozen=True)
class LeakageSpec:
    """Couplings and detunings of the two nearby Rydberg leak levels."""

    omega_d: complex = 0.0   # |1> <-> |d>, rad/s
    omega_s: complex = 0.0   # |0> <-> |s>, rad/s
    delta_d: float = 0.0     # rad/s
    delta_s: float = 0.0     # rad/s

    @classmethod
    def from_mhz(cls, omega_d_mhz=0.0, omega_s_mhz=0.0,
                 delta_d_mhz=0.0, delta_s_mhz=0.0):
        return cls(omega_d=complex(cn.mhz(omega_d_mhz)),
                   omega_s=complex(cn.mhz(omega_s_mhz)),
                   delta_d=float(cn.mhz(delta_d_mhz)),
                   delta_s=float(cn.mhz(delta_s_mhz)))


def h_atom_leak(laser, leak):
    """Per-atom 6-level Hamiltonian on {|0>,|1>,|r>,|d>,|s>,|a>}.

    The leak detunings appear diagonally; |a> is a decay sink with no
    coherent coupling.
    """
    h = np.zeros((cn.N_LEVELS, cn.N_LEVELS), dtype=complex)
    h[cn.LVL_R, cn.LVL_1] = laser.rabi / 2.0
    h[cn.LVL_1, cn.LVL_R] = np.conj(laser.rabi) / 2.0
    h[cn.LVL_R, cn.LVL_R] = laser.detuning
    h[cn.LVL_D, cn.LVL_1] = leak.omega_d / 2.0
    h[cn.LVL_1, cn.LVL_D] = np.conj(leak.omega_d) / 2.0
    h[cn.LVL_D, cn.LVL_D] = leak.delta_d
    h[cn.LVL_S, cn.LVL_0] = leak.omega_s / 2.0
    h[cn.LVL_0, cn.LVL_S] = np.conj(leak.omega_s) / 2.0
    h[cn.LVL_S, cn.LVL_S] = leak.delta_s
    return h


def h_leak_two_atom(leak, laser_c, laser_t, inter):
    """36x36 two-atom Hamiltonian including the leak levels.

    Basis: {|0>,|1>,|r>,|d>,|s>,|a>} per atom, control slot first,
    row-major product ordering.  Interactions of leak states are set to
    zero; only |rr> carries the van der Waals shift.
    """
    eye = np.eye(cn.N_LEVELS)
    h = (np.kron(h_atom_leak(laser_c, leak), eye)
         + np.kron(eye, h_atom_leak(laser_t, leak)))
    rr = cn.two_atom_index(cn.LVL_R, cn.LVL_R)
    h[rr, rr] += inter.v
    return assert_hermitian(h)
