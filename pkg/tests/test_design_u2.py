"""Two-pulse design: staged evolution, Pedersen error, search."""

import csv

import numpy as np
import pytest

from rydgates import constants as cn
from rydgates.catalog import U2_CASES
from rydgates.design_u2 import CSV_COLUMNS_U2, U2SearchConstraints, \
    beta_u2, decay_error_u2, design_u2_from_mhz, designs_to_csv_u2, \
    evolve_11_staged, make_design_u2, pedersen_error, search_u2, u2_angles
from rydgates.model import InteractionParams, LaserParams


def test_u2_angles_resonant():
    lc = LaserParams.from_mhz(4.0, 0.0)
    lt = LaserParams.from_mhz(6.0, 0.0)
    alpha, gamma = u2_angles(lc, lt, 1, 2)
    assert alpha == pytest.approx(-np.pi)
    assert gamma == pytest.approx(-2 * np.pi)


def test_u2_angles_against_propagation(u2_cases):
    from rydgates.model import h_single
    from rydgates.qmath import propagate_const
    d = u2_cases[0]
    a10 = propagate_const(h_single(d.laser_c), np.array([0, 1], complex),
                          d.t_c)[1]
    a01 = propagate_const(h_single(d.laser_t), np.array([0, 1], complex),
                          d.t_t)[1]
    da = (np.angle(a10) - d.alpha) % (2 * np.pi)
    dg = (np.angle(a01) - d.gamma) % (2 * np.pi)
    assert min(da, 2 * np.pi - da) < 1e-9
    assert min(dg, 2 * np.pi - dg) < 1e-9


def test_staged_evolution_factorizes_at_zero_v():
    lc = LaserParams.from_mhz(5.0, 1.3)
    lt = LaserParams.from_mhz(8.0, -0.7)
    inter = InteractionParams(v=0.0)
    amp, p_rr, p_ctrl = evolve_11_staged(lc, lt, inter, 1, 2)
    alpha, gamma = u2_angles(lc, lt, 1, 2)
    assert abs(amp) == pytest.approx(1.0, abs=1e-9)
    diff = (np.angle(amp) - alpha - gamma) % (2 * np.pi)
    assert min(diff, 2 * np.pi - diff) < 1e-8
    d = make_design_u2(lc, lt, inter, 1, 2)
    target = np.diag([1, np.exp(1j * gamma), np.exp(1j * alpha),
                      np.exp(1j * (alpha + gamma))])
    assert pedersen_error(target, d.u2_actual()) < 1e-10


def test_staged_swaps_when_control_longer():
    # t_t < t_c: handled by the symmetric relabeling
    lc = LaserParams.from_mhz(10.0, 3.329994)
    lt = LaserParams.from_mhz(5.306482, 0.8152206)
    inter = InteractionParams.from_mhz(-5.442221)
    amp_swapped, _, _ = evolve_11_staged(lc, lt, inter, 2, 1)
    amp_ref, _, _ = evolve_11_staged(lt, lc, inter, 1, 2)
    assert amp_swapped == pytest.approx(amp_ref, abs=1e-12)


def test_table_rows(u2_cases):
    for d, ref in zip(u2_cases, U2_CASES):
        assert d.t_c / cn.NS == pytest.approx(ref.tc_ns, abs=1.0)
        assert d.t_t / cn.NS == pytest.approx(ref.tt_ns, abs=1.0)
        unreduced = (d.beta_actual - d.alpha - d.gamma) / np.pi
        assert unreduced == pytest.approx(ref.bag_pi, abs=1e-3)
        assert ref.e_ro / 3 <= d.e_ro <= 3 * ref.e_ro
        assert d.e_de_tau / cn.NS == pytest.approx(ref.e_de_ns, rel=0.05)
        assert 1 - abs(1 - d.deficit) == pytest.approx(d.deficit)
        assert d.amp_quality


def test_sign_flip_pair(u2_cases):
    # cases 1/2 mirror: opposite angle sign, same errors
    d1, d2 = u2_cases[0], u2_cases[1]
    assert d1.target_sign == 1 and d2.target_sign == -1
    assert d1.e_ro == pytest.approx(d2.e_ro, rel=1e-6)
    s1 = d1.beta_minus_alpha_minus_gamma
    s2 = d2.beta_minus_alpha_minus_gamma
    assert (s1 + s2) % (2 * np.pi) == pytest.approx(2 * np.pi, abs=1e-3)


def test_beta_u2_and_quality_flag(u2_cases):
    d = u2_cases[0]
    assert beta_u2(d) == d.beta_actual
    # a detuned mismatched set gives a poor-quality amplitude
    bad = make_design_u2(LaserParams.from_mhz(8.0, 0.3),
                         LaserParams.from_mhz(9.0, 0.2),
                         InteractionParams.from_mhz(-6.0), 1, 1)
    assert isinstance(bad.amp_quality, bool)


def test_global_scaling_property():
    # scaling all frequencies by s rescales times by 1/s and preserves
    # the angles and the rotation error
    ref = U2_CASES[0]
    d1 = design_u2_from_mhz(ref.omega_c_mhz, ref.delta_c_mhz,
                            ref.omega_t_mhz, ref.delta_t_mhz, ref.v_mhz,
                            ref.n_c, ref.n_t)
    s = 1.7
    d2 = design_u2_from_mhz(s * ref.omega_c_mhz, s * ref.delta_c_mhz,
                            s * ref.omega_t_mhz, s * ref.delta_t_mhz,
                            s * ref.v_mhz, ref.n_c, ref.n_t)
    assert d2.t_c == pytest.approx(d1.t_c / s, rel=1e-12)
    assert d2.t_t == pytest.approx(d1.t_t / s, rel=1e-12)
    assert d2.alpha == pytest.approx(d1.alpha, rel=1e-12)
    assert d2.gamma == pytest.approx(d1.gamma, rel=1e-12)
    assert d2.beta_actual == pytest.approx(d1.beta_actual, abs=1e-9)
    assert d2.e_ro == pytest.approx(d1.e_ro, rel=1e-6)


def test_pedersen_error_limits():
    target = np.diag([1, 1j, -1j, -1]).astype(complex)
    assert pedersen_error(target, target) == pytest.approx(0.0, abs=1e-14)
    # closed form for the diagonal contraction
    alpha, gamma, beta = 0.3, -0.2, 0.9
    eps, beta_p = 0.97, 1.05
    target = np.diag([1, np.exp(1j * alpha), np.exp(1j * gamma),
                      np.exp(1j * beta)])
    actual = np.diag([1, np.exp(1j * alpha), np.exp(1j * gamma),
                      eps * np.exp(1j * beta_p)])
    expect = 1 - (abs(3 + eps * np.exp(1j * (beta_p - beta))) ** 2
                  + 3 + eps**2) / 20
    assert pedersen_error(target, actual) == pytest.approx(expect,
                                                           abs=1e-14)
    # direct substitution of a null contraction: both traces vanish
    assert pedersen_error(target, np.zeros((4, 4))) == pytest.approx(1.0)


def test_pedersen_error_rejects_wrong_shape():
    with pytest.raises(ValueError):
        pedersen_error(np.eye(3), np.eye(3))


def test_pulse_start_offset_insensitive(u2_cases):
    # shifting the shorter pulse start inside the duration gap moves the
    # rotation error by less than 1e-5
    d = u2_cases[0]
    base = d.e_ro
    for frac in (0.25, 0.5, 1.0):
        err = pedersen_error(d.u2_target(),
                             d.u2_actual(start_offset=frac
                                         * (d.t_t - d.t_c)))
        assert abs(err - base) < 1e-5


def test_decay_error_swapped_roles(u2_cases):
    d = u2_cases[0]
    swapped = make_design_u2(d.laser_t, d.laser_c, d.interaction,
                             d.n_t, d.n_c)
    assert decay_error_u2(swapped) == pytest.approx(d.e_de_tau, rel=1e-4)


def test_search_seeded_recovery_precision():
    ref = U2_CASES[0]
    constraints = U2SearchConstraints(
        omega_c_range=(cn.mhz(5.0), cn.mhz(5.6)),
        delta_c_range=(cn.mhz(0.6), cn.mhz(1.0)),
        delta_t_range=(cn.mhz(3.0), cn.mhz(3.6)),
        v_range=(cn.mhz(-5.8), cn.mhz(-5.1)),
        n_c_range=(1, 1), n_t_range=(2, 2), target_sign=1,
        starts=((cn.mhz(5.31), cn.mhz(0.81), cn.mhz(3.33),
                 cn.mhz(-5.44)),))
    out = search_u2(constraints)
    assert len(out) == 1
    d = out[0]
    # the residual basin is flat at the 1e-4 level: the optimum of the
    # rotation-error objective sits within ~3e-4 of the catalogued point
    assert cn.to_mhz(abs(d.laser_c.rabi)) == pytest.approx(
        ref.omega_c_mhz, abs=5e-4)
    assert cn.to_mhz(d.laser_c.detuning) == pytest.approx(
        ref.delta_c_mhz, abs=5e-4)
    assert cn.to_mhz(d.laser_t.detuning) == pytest.approx(
        ref.delta_t_mhz, abs=5e-4)
    assert cn.to_mhz(d.interaction.v) == pytest.approx(ref.v_mhz,
                                                       abs=5e-4)
    assert d.e_ro < 1e-5
    assert abs(d.beta_minus_alpha_minus_gamma - np.pi / 2) < 1e-4


def test_search_empty_for_impossible_thresholds():
    constraints = U2SearchConstraints(
        omega_c_range=(cn.mhz(5.0), cn.mhz(5.6)),
        delta_c_range=(cn.mhz(0.6), cn.mhz(1.0)),
        delta_t_range=(cn.mhz(3.0), cn.mhz(3.6)),
        v_range=(cn.mhz(-5.8), cn.mhz(-5.1)),
        n_c_range=(1, 1), n_t_range=(2, 2),
        e_ro_max=1e-18, n_starts=2)
    assert search_u2(constraints) == []


def test_csv_schema(tmp_path, u2_cases):
    path = tmp_path / "u2.csv"
    designs_to_csv_u2(u2_cases, path)
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0].keys()) == CSV_COLUMNS_U2
    assert len(rows) == 4
    assert float(rows[0]["tc_ns"]) == pytest.approx(186.26, abs=0.01)
    assert float(rows[0]["beta_minus_alpha_minus_gamma_over_pi"]) == \
        pytest.approx(0.5, abs=1e-3)
