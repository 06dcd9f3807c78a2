"""Clebsch-Gordan / 6-j coefficients against exact-arithmetic oracles."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan as sympy_cg
from sympy.physics.wigner import wigner_6j as sympy_6j

from rydgates.angular import clebsch_gordan, clebsch_gordan_exact, \
    wigner_3j, wigner_6j, wigner_6j_exact


def _half(x):
    return Rational(x).limit_denominator(2)


def test_singlet_by_hand():
    # Racah formula by hand: the (1/2, +1/2) x (1/2, -1/2) singlet
    # component is +1/sqrt(2); the swapped-m component is -1/sqrt(2).
    assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == \
        pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0, 0) == \
        pytest.approx(-1 / math.sqrt(2), abs=1e-15)


def test_projection_rule_zero():
    assert clebsch_gordan(1, 1, 1, 1, 2, 1) == 0.0
    assert clebsch_gordan(1, 0, 0.5, 0.5, 1.5, 0.5) != 0.0
    assert clebsch_gordan(1, 0, 0.5, 0.5, 1.5, 0.0) == 0.0


def test_triangle_rule_zero():
    assert clebsch_gordan(1, 0, 1, 0, 3, 0) == 0.0
    assert wigner_6j(0.5, 0.5, 2, 0.5, 0.5, 1) == 0.0


def test_half_integer_validation():
    with pytest.raises(ValueError):
        clebsch_gordan(0.3, 0, 1, 0, 1, 0)


def test_cg_against_sympy_exact(rng):
    checked = 0
    while checked < 120:
        j1 = rng.integers(0, 6) / 2
        j2 = rng.integers(0, 6) / 2
        jj = rng.integers(int(2 * abs(j1 - j2)), int(2 * (j1 + j2)) + 1) / 2
        m1 = rng.integers(-int(2 * j1), int(2 * j1) + 1) / 2
        m2 = rng.integers(-int(2 * j2), int(2 * j2) + 1) / 2
        if (j1 + j2 + jj) % 1 or (j1 + m1) % 1 or (j2 + m2) % 1:
            continue
        if abs(m1 + m2) > jj:
            continue
        ref = float(sympy_cg(_half(j1), _half(j2), _half(jj),
                             _half(m1), _half(m2), _half(m1 + m2)))
        assert clebsch_gordan(j1, m1, j2, m2, jj, m1 + m2) == \
            pytest.approx(ref, abs=1e-13)
        checked += 1


def test_6j_against_sympy_exact(rng):
    for _ in range(200):
        js = rng.integers(0, 6, 6) / 2
        try:
            ref = float(sympy_6j(*[_half(j) for j in js]))
        except ValueError:
            ref = 0.0
        assert wigner_6j(*js) == pytest.approx(ref, abs=1e-13)


def test_cg_completeness(rng):
    # sum over (J, M) of C^2 is 1 for any fixed (j1, m1, j2, m2)
    for _ in range(25):
        j1 = rng.integers(0, 5) / 2
        j2 = rng.integers(0, 5) / 2
        m1 = rng.integers(-int(2 * j1), int(2 * j1) + 1) / 2
        m2 = rng.integers(-int(2 * j2), int(2 * j2) + 1) / 2
        if (j1 + m1) % 1 or (j2 + m2) % 1:
            continue
        total = 0.0
        jj = abs(j1 - j2)
        while jj <= j1 + j2:
            total += clebsch_gordan(j1, m1, j2, m2, jj, m1 + m2) ** 2
            jj += 1
        assert total == pytest.approx(1.0, abs=1e-12)


def test_6j_orthogonality(rng):
    # sum_j3 (2 j3 + 1)(2 j6 + 1) {j1 j2 j3; j4 j5 j6}^2 = 1 whenever the
    # (j1 j5 j6) and (j4 j2 j6) triads are valid
    checked = 0
    while checked < 20:
        j1, j2, j4, j5 = rng.integers(0, 5, 4) / 2
        j6s = np.arange(abs(j1 - j5), j1 + j5 + 0.5)
        j6s = [j for j in j6s if abs(j4 - j2) <= j <= j4 + j2
               and (j4 + j2 + j) % 1 == 0]
        if not j6s:
            continue
        j6 = j6s[0]
        total = 0.0
        j3 = max(abs(j1 - j2), abs(j4 - j5))
        while j3 <= min(j1 + j2, j4 + j5):
            total += (2 * j3 + 1) * (2 * j6 + 1) \
                * wigner_6j(j1, j2, j3, j4, j5, j6) ** 2
            j3 += 1
        assert total == pytest.approx(1.0, abs=1e-12)
        checked += 1


def test_exact_arithmetic_matches_high_precision():
    # the (s, r) decomposition evaluated at 50 digits agrees with the
    # float path to well below 1e-12
    cases = [(1.5, 0.5, 1, 0, 2.5, 0.5), (2, 1, 1, -1, 3, 0),
             (2.5, -1.5, 1.5, 0.5, 2, -1)]
    for args in cases:
        s, r = clebsch_gordan_exact(*args)
        with mpmath.workdps(50):
            hi = mpmath.mpf(s.numerator) / s.denominator * mpmath.sqrt(
                mpmath.mpf(r.numerator) / r.denominator)
            assert abs(clebsch_gordan(*args) - float(hi)) < 1e-13
    s, r = wigner_6j_exact(1, 2, 3, 2, 1, 2)
    assert isinstance(s, Fraction) and isinstance(r, Fraction)
    with mpmath.workdps(50):
        hi = mpmath.mpf(s.numerator) / s.denominator * mpmath.sqrt(
            mpmath.mpf(r.numerator) / r.denominator)
        assert abs(wigner_6j(1, 2, 3, 2, 1, 2) - float(hi)) < 1e-14


def test_wigner_3j_relation():
    # 3-j from CG with the standard phase
    val = wigner_3j(1, 1, 2, 1, -1, 0)
    ref = clebsch_gordan(1, 1, 1, -1, 2, 0) / np.sqrt(5)
    assert val == pytest.approx(ref, abs=1e-14)
