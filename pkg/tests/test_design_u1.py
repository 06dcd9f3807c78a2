"""Single-pulse design: angles, resonance residuals, errors, search."""

import csv

import numpy as np
import pytest

from rydgates import constants as cn
from rydgates.catalog import U1_CASES
from rydgates.design_u1 import CSV_COLUMNS_U1, decay_error, \
    designs_to_csv, gate_time, alpha_angle, \
    leakage_estimate, make_design, mirrored_design, refine_design, \
    resonance_residuals, rotation_error_u1, search_u1, stark_frequencies
from rydgates.design_u2 import pedersen_error
from rydgates.model import InteractionParams, LaserParams, h_single, \
    h_two_atom, h_v1
from rydgates.qmath import eig_numeric, propagate_const


def test_gate_time_values():
    laser = LaserParams.from_mhz(10.0, 19.252)
    assert gate_time(laser, 4) / cn.NS == pytest.approx(184.4, abs=0.05)
    resonant = LaserParams.from_mhz(5.0, 0.0)
    assert gate_time(resonant, 1) == pytest.approx(2 * np.pi / cn.mhz(5.0))
    low = LaserParams.from_mhz(0.8, -1.54016)
    assert gate_time(low, 4) / cn.NS == pytest.approx(2304.76, abs=0.01)


def test_gate_time_rejects_zero():
    with pytest.raises(ValueError):
        gate_time(LaserParams(rabi=0.0, detuning=0.0), 1)
    with pytest.raises(ValueError):
        gate_time(LaserParams.from_mhz(1.0, 0.0), 0)


def test_alpha_angle_formula_and_oracle():
    assert alpha_angle(LaserParams.from_mhz(3.0, 0.0), 2) == \
        pytest.approx(-2 * np.pi)
    low = LaserParams.from_mhz(0.8, -1.54016)
    alpha = alpha_angle(low, 4)
    assert (alpha / np.pi) % 2 - 2 == pytest.approx(-0.45030, abs=2e-5)
    # oracle: propagation phase
    t_g = gate_time(low, 4)
    amp = propagate_const(h_single(low), np.array([0, 1], complex), t_g)[1]
    diff = (np.angle(amp) - alpha) % (2 * np.pi)
    assert min(diff, 2 * np.pi - diff) < 1e-9


def test_stark_frequencies_properties(u1_cases):
    d = u1_cases[0]
    c = stark_frequencies(d.laser, d.interaction)
    assert abs(c.sum()) < 1e-10 * np.abs(c).max()
    cycles = d.t_g * c / (2 * np.pi)
    assert np.abs(cycles - (2, 1, -3)).max() < 1e-5
    # consistency with the analytic eigensolver
    from rydgates.qmath import eig3_shengjin
    eps = eig3_shengjin(d.laser.rabi, d.laser.detuning, d.interaction.v)
    pred = d.laser.detuning + d.interaction.v / 3 - c
    assert np.abs(np.sort(eps) - np.sort(pred)).max() \
        < 1e-10 * np.abs(eps).max()


def test_stark_frequencies_zero_coupling():
    # Omega -> 0: the frequencies reproduce the diagonal differences
    d, v = cn.mhz(3.0), cn.mhz(10.0)
    c = stark_frequencies(LaserParams.from_mhz(0, 3.0),
                          InteractionParams(v=v))
    eps = np.sort(d + v / 3 - c)
    assert np.allclose(eps, np.sort([v + 2 * d, d, 0.0]), atol=1.0)


def test_resonance_residuals_and_rounding(rng):
    for _ in range(10):
        laser = LaserParams.from_mhz(10.0, rng.uniform(-30, 30))
        inter = InteractionParams.from_mhz(rng.uniform(-50, 50))
        d = make_design(laser, inter, int(rng.integers(1, 8)))
        r = resonance_residuals(d)
        assert np.abs(r).max() <= 0.5 + 1e-12
        # the three cycle counts sum to zero exactly, so the rounded
        # integers and the residuals always cancel
        assert sum(d.m_integers) + r.sum() == pytest.approx(0.0, abs=1e-9)


def test_residual_sensitivity_smooth(u1_cases):
    # 1% perturbation of V shifts residuals linearly (finite difference)
    d = u1_cases[0]
    base = resonance_residuals(d)

    def residual_at(scale):
        inter = InteractionParams(v=d.interaction.v * scale)
        return resonance_residuals(make_design(d.laser, inter,
                                               d.n_cycles, d.m_integers))

    h = 1e-4
    slope = (residual_at(1 + h) - residual_at(1 - h)) / (2 * h)
    pred = base + slope * 0.01
    got = residual_at(1.01)
    assert np.abs(got - pred).max() < 5e-4 * np.abs(slope).max()


def test_table_rows_at_printed_parameters(u1_cases):
    for d, ref in zip(u1_cases, U1_CASES):
        assert d.m_integers == ref.m
        assert d.t_g / cn.NS == pytest.approx(ref.tg_ns, abs=1.0)
        assert d.beta_minus_2alpha / np.pi == pytest.approx(ref.b2a_pi,
                                                            abs=1e-4)
        assert ref.e_ro / 3 <= d.e_ro <= 3 * ref.e_ro
        assert d.e_de_tau / cn.NS == pytest.approx(ref.e_de_ns, rel=0.02)


def test_rotation_error_zero_coupling():
    d = make_design(LaserParams.from_mhz(0.0, 5.0),
                    InteractionParams.from_mhz(3.0), 1, (0, 0, 0))
    assert rotation_error_u1(d) == 0.0
    assert decay_error(d) == 0.0


def test_decay_error_against_eigenbasis_quadrature(u1_cases):
    # independent oracle: closed-form time integral of the populations in
    # the eigenbasis (the cross terms integrate to analytic phases)
    d = u1_cases[0]
    h2 = h_single(d.laser)
    es = eig_numeric(h2)
    amps = es.vectors.conj().T @ np.array([0, 1], complex)

    def integral_population(es, amps, row, t_g):
        vec = es.vectors[row, :] * amps
        total = 0.0
        for j in range(len(vec)):
            for k in range(len(vec)):
                w = es.values[j] - es.values[k]
                term = vec[j] * np.conj(vec[k])
                if abs(w) < 1e-6:
                    total += (term * t_g).real
                else:
                    total += (term * (np.exp(-1j * w * t_g) - 1)
                              / (-1j * w)).real
        return total

    t01 = integral_population(es, amps, 0, d.t_g)
    es3 = eig_numeric(h_v1(d.laser, d.interaction))
    amps3 = es3.vectors.conj().T @ np.array([0, 0, 1], complex)
    t_sym = integral_population(es3, amps3, 1, d.t_g)
    t_rr = integral_population(es3, amps3, 0, d.t_g)
    oracle = (2 * t01 + t_sym + 2 * t_rr) / 4
    assert decay_error(d) == pytest.approx(oracle, rel=1e-6)


def test_refine_design_zeroes_residuals(u1_cases):
    refined = refine_design(u1_cases[0])
    assert np.abs(resonance_residuals(refined)).max() < 1e-10
    assert refined.e_ro < 1e-13
    # beta consistency: formula beta equals -(Delta + V/3) t_g
    beta = -(refined.laser.detuning + refined.interaction.v / 3) \
        * refined.t_g
    assert refined.beta == pytest.approx(beta, rel=1e-12)


def test_full_gate_reconstruction_pedersen(u1_cases):
    # evolving all four basis states under the 9-dim two-atom Hamiltonian
    # matches diag(1, e^ia, e^ia, e^ib) within 3 E_ro + 1e-9
    for d in u1_cases:
        h = h_two_atom(d.laser, d.laser, d.interaction)
        cols = []
        comp = [0, 1, 3, 4]      # |00>, |01>, |10>, |11> in the 9-dim basis
        for idx in comp:
            psi = np.zeros(9, complex)
            psi[idx] = 1.0
            cols.append(propagate_const(h, psi, d.t_g)[comp])
        actual = np.array(cols).T
        target = np.diag([1.0, np.exp(1j * d.alpha_actual),
                          np.exp(1j * d.alpha_actual),
                          np.exp(1j * d.beta_actual)])
        assert pedersen_error(target, actual) < 3 * d.e_ro + 1e-9


def test_beta_phase_invariant(u1_cases):
    # at the catalogued (rounded) parameters the propagated phase drifts
    # from the formula by the residual slip; refinement removes it
    for d in u1_cases:
        diff = (d.beta_actual - d.beta) % (2 * np.pi)
        assert min(diff, 2 * np.pi - diff) < 1e-3
        refined = refine_design(d)
        diff_r = (refined.beta_actual - refined.beta) % (2 * np.pi)
        assert min(diff_r, 2 * np.pi - diff_r) < 1e-4


def test_doubling_duration_doubles_angles(u1_cases):
    d = u1_cases[0]
    a2 = propagate_const(h_single(d.laser), np.array([0, 1], complex),
                         2 * d.t_g)[1]
    b2 = propagate_const(h_v1(d.laser, d.interaction),
                         np.array([0, 0, 1], complex), 2 * d.t_g)[2]
    da = (np.angle(a2) - 2 * d.alpha_actual) % (2 * np.pi)
    db = (np.angle(b2) - 2 * d.beta_actual) % (2 * np.pi)
    assert min(da, 2 * np.pi - da) < 1e-6
    assert min(db, 2 * np.pi - db) < 1e-4


def test_leakage_estimate():
    # the estimate vanishes when y/x hits a multiple of pi and is bounded
    # by x^2
    x = 0.3
    omega = cn.mhz(3.0)
    delta = omega * np.sqrt(1 / x**2 - 1)
    assert leakage_estimate(omega, delta, np.pi * x) < 1e-25
    assert leakage_estimate(omega, delta, 1.234) <= x**2
    # low-Rabi operating point: far-detuned s-channel leak < 1e-5
    assert leakage_estimate(cn.mhz(0.8), cn.mhz(520.0), 8 * np.pi) < 1e-5


def test_mirrored_design_flips_angle(u1_cases):
    d = u1_cases[0]
    m = mirrored_design(d)
    assert m.m_integers == tuple(-x for x in d.m_integers)
    assert (m.beta_minus_2alpha + d.beta_minus_2alpha) % (2 * np.pi) == \
        pytest.approx(0.0, abs=1e-6) or \
        (m.beta_minus_2alpha + d.beta_minus_2alpha) % (2 * np.pi) == \
        pytest.approx(2 * np.pi, abs=1e-6)
    assert m.e_ro == pytest.approx(d.e_ro, rel=1e-3, abs=1e-14)


def test_search_recovers_case1():
    out = search_u1(cn.mhz(10.0), (cn.mhz(18), cn.mhz(21)),
                    (cn.mhz(-37), cn.mhz(-33)), 4)
    assert len(out) >= 1
    hit = [d for d in out if d.m_integers == (2, 1, -3)]
    assert len(hit) == 1
    d = hit[0]
    assert cn.to_mhz(d.laser.detuning) == pytest.approx(19.252, abs=1e-4)
    assert cn.to_mhz(d.interaction.v) == pytest.approx(-35.1818, abs=1e-4)
    assert sum(d.m_integers) == 0


def test_search_sum_m_zero_and_ordering():
    out = search_u1(cn.mhz(10.0), (cn.mhz(-25), cn.mhz(-22)),
                    (cn.mhz(50), cn.mhz(54)), 10, n_min=9)
    assert all(sum(d.m_integers) == 0 for d in out)
    e_des = [d.e_de_tau for d in out]
    assert e_des == sorted(e_des)


def test_search_impossible_thresholds_empty():
    # a resonance root has exactly zero rotation error, so the impossible
    # threshold must act on the decay error, which is strictly positive
    out = search_u1(cn.mhz(10.0), (cn.mhz(18), cn.mhz(21)),
                    (cn.mhz(-37), cn.mhz(-33)), 4, e_de_max_tau=0.0)
    assert out == []


def test_csv_round_trip(tmp_path, u1_cases):
    path = tmp_path / "u1.csv"
    designs_to_csv(u1_cases, path)
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    assert tuple(rows[0].keys()) == CSV_COLUMNS_U1
    assert float(rows[0]["delta_MHz"]) == pytest.approx(19.252)
    assert float(rows[0]["beta_minus_2alpha_over_pi"]) == \
        pytest.approx(0.32457, abs=1e-4)
    assert int(rows[0]["M3"]) == -3
