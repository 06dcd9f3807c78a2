"""Two-photon Rabi frequencies through the 5P3/2 hyperfine manifold and
the leakage-channel couplings, from angular-momentum algebra.

Both photons are pi-polarized; the qubit states are |1> = |F=2, mF=2>
and |0> = |F=1, mF=1| of the 5S1/2 ground manifold, and the upper
transition targets fine-structure Rydberg levels (nS1/2 or nD) where the
nuclear spin is a spectator.  Radial reduced matrix elements are not
computed here: they enter as configuration ratios relative to the target
nS transition, with defaults calibrated to the 2 : 1 : 0.84 coupling
hierarchy of the d-, principal and s-channels at a 2-GHz lower-photon
detuning.
"""

from dataclasses import dataclass

import numpy as np

from . import constants as cn
from .angular import clebsch_gordan, wigner_6j

I_NUC = 1.5          # 87Rb nuclear spin
J_GROUND = 0.5       # 5S1/2
J_INTER = 1.5        # 5P3/2
L_INTER = 1.0
SPIN = 0.5

STATE_1 = (2.0, 2.0)     # (F, mF) of qubit |1>
STATE_0 = (1.0, 1.0)     # (F, mF) of qubit |0>

# 5P3/2 hyperfine intervals (rad/s): F'=3 sits highest.
SPLIT_32 = cn.mhz(266.65)
SPLIT_21 = cn.mhz(156.95)
SPLIT_10 = cn.mhz(72.22)
GROUND_SPLIT = cn.mhz(6834.68)

# Radial-ratio defaults: effective |(5P||r||98D)/(5P||r||100S)| and
# |(5P||r||99S)/(5P||r||100S)|, calibrated so the computed couplings
# reproduce the 2 : 1 : 0.84 hierarchy at delta_2pho = 2 pi x 2 GHz
# (see tests); they are configuration inputs, not derived quantities.
# The d-channel angular sums happen to make Omega_d/Omega_0 equal the
# radial ratio itself, so its calibrated default is exactly 2.
RADIAL_RATIO_D_DEFAULT = 2.0
RADIAL_RATIO_S_DEFAULT = 1.5787124293720094


@dataclass(frozen=True)
class ExcitationScheme:
    """Detunings (rad/s), field-strength product, and radial ratios."""

    delta_2pho: float = cn.mhz(2000.0)
    delta_hyp: float = SPLIT_32
    field_product: float = 1.0           # E_low E_upp x common radial scale
    radial_ratio_d: float = RADIAL_RATIO_D_DEFAULT
    radial_ratio_s: float = RADIAL_RATIO_S_DEFAULT

    def __post_init__(self):
        if self.delta_2pho == 0.0 or self.delta_hyp == 0.0:
            raise ValueError("detunings must be nonzero")


def hyperfine_dipole_factor(f_ground, m_ground, f_excited, m_excited, q,
                            j_ground=J_GROUND, j_excited=J_INTER,
                            i_nuc=I_NUC):
    """<Je I F' m'| d_q |Jg I F m> in units of the fine reduced element.

    Wigner-Eckart over F plus the hyperfine-to-fine 6-j reduction."""
    wig = wigner_6j(j_excited, f_excited, i_nuc, f_ground, j_ground, 1)
    red = ((-1) ** int(round(j_excited + i_nuc + f_ground + 1))
           * np.sqrt((2 * f_ground + 1) * (2 * f_excited + 1)) * wig)
    return (clebsch_gordan(f_ground, m_ground, 1, q, f_excited, m_excited)
            / np.sqrt(2 * f_excited + 1) * red)


def fine_dipole_factor(j_upper, l_upper, m_upper, j_lower, l_lower,
                       m_lower, q, spin=SPIN):
    """<J' m'| d_q |J m> in units of the orbital reduced element,
    via the fine-to-orbital 6-j reduction."""
    wig = wigner_6j(l_upper, j_upper, spin, j_lower, l_lower, 1)
    red = ((-1) ** int(round(l_upper + spin + j_lower + 1))
           * np.sqrt((2 * j_lower + 1) * (2 * j_upper + 1)) * wig)
    return (clebsch_gordan(j_lower, m_lower, 1, q, j_upper, m_upper)
            / np.sqrt(2 * j_upper + 1) * red)


def intermediate_amplitude(f_excited, m_excited, j_final, l_final, m_j,
                           m_i):
    """Upper-photon amplitude <J_f m_j, I m_i| d_0 |5P3/2 F' m'> in units
    of the orbital reduced element: the hyperfine intermediate is
    decomposed onto |m_J, m_I> and the pi photon acts on the electron."""
    decomp = clebsch_gordan(J_INTER, m_j, I_NUC, m_i, f_excited, m_excited)
    if decomp == 0.0:
        return 0.0
    return decomp * fine_dipole_factor(j_final, l_final, m_j,
                                       J_INTER, L_INTER, m_j, 0)


def _lower_paths(state, scheme):
    """(F', detuning) pairs reachable from a ground (F, mF) by pi light.

    Detunings are referenced to the F'=3 level at ``delta_2pho``; paths
    from |0> additionally carry the ground hyperfine splitting."""
    f_g, m_g = state
    offsets = {3.0: 0.0, 2.0: scheme.delta_hyp,
               1.0: scheme.delta_hyp + SPLIT_21,
               0.0: scheme.delta_hyp + SPLIT_21 + SPLIT_10}
    ground_shift = GROUND_SPLIT if state == STATE_0 else 0.0
    paths = []
    for f_e, off in offsets.items():
        if abs(f_g - f_e) > 1 or abs(m_g) > f_e:
            continue
        amp = hyperfine_dipole_factor(f_g, m_g, f_e, m_g, 0)
        if amp == 0.0:
            continue
        paths.append((f_e, m_g, amp, scheme.delta_2pho + off - ground_shift))
    return paths


def _two_photon_components(state, scheme, j_final, l_final, radial_ratio):
    """Per-Zeeman-component two-photon couplings (path quadrature).

    Returns a list of ((m_j, m_i), coupling) for every reachable final
    component of the (j_final, l_final) level; units are arbitrary but
    common to all channels.
    """
    f_g, m_g = state
    comps = {}
    for m_j in np.arange(-j_final, j_final + 1):
        m_i = m_g - m_j
        if abs(m_i) > I_NUC:
            continue
        terms = []
        for f_e, m_e, low_amp, detuning in _lower_paths(state, scheme):
            upp = intermediate_amplitude(f_e, m_e, j_final, l_final,
                                         m_j, m_i)
            if upp == 0.0:
                continue
            terms.append(scheme.field_product * radial_ratio
                         * low_amp * upp / (2.0 * detuning))
        if terms:
            value = float(np.sqrt(np.sum(np.square(terms))))
            if value > 0.0:
                comps[(float(m_j), float(m_i))] = value
    return sorted(comps.items())


def two_photon_rabi(scheme):
    """Effective |1> -> |r> coupling (relative units): path quadrature
    through the F'=3 and F'=2 intermediates onto the single reachable
    nS1/2 Zeeman component."""
    comps = _two_photon_components(STATE_1, scheme, 0.5, 0.0, 1.0)
    if not comps:
        return 0.0
    return float(np.sqrt(sum(v**2 for _, v in comps)))


def leak_zetas(scheme, channel):
    """Selection-rule weights of the leak superposition, unit norm."""
    comps = _leak_components(scheme, channel)
    values = np.array([v for _, v in comps])
    total = np.linalg.norm(values)
    if total == 0.0:
        return values
    return values / total


def validate_zetas(zetas, tol=1e-9):
    z = np.asarray(zetas, dtype=float)
    if abs(float(z @ z) - 1.0) > tol:
        raise ValueError("leak-state weights must satisfy sum zeta^2 = 1")
    return z


def _leak_components(scheme, channel):
    if channel == "d":
        comps = []
        for j_final in (1.5, 2.5):
            comps += _two_photon_components(STATE_1, scheme, j_final, 2.0,
                                            scheme.radial_ratio_d)
        return comps
    if channel == "s":
        return _two_photon_components(STATE_0, scheme, 0.5, 0.0,
                                      scheme.radial_ratio_s)
    raise ValueError("channel must be 'd' or 's'")


def leak_rabi(scheme, channel):
    """Coupling to the bright leak superposition: quadrature over the
    channel's Zeeman-component couplings, each the quadrature of its
    intermediate-path terms."""
    comps = _leak_components(scheme, channel)
    values = np.array([v for _, v in comps])
    if values.size == 0:
        return 0.0
    return float(np.linalg.norm(values))


def coupling_hierarchy(scheme):
    """(Omega_d, Omega_0, Omega_s) in common relative units."""
    return (leak_rabi(scheme, "d"), two_photon_rabi(scheme),
            leak_rabi(scheme, "s"))
