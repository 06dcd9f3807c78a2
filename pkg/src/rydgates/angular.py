"""Clebsch-Gordan and Wigner 6-j coefficients in exact rational arithmetic.

The Racah formulas are evaluated with ``fractions.Fraction`` so every
coefficient is an exact rational ``s`` times the square root of an exact
rational ``r``; the public functions return ``float(s) * sqrt(float(r))``.
Arguments must be integers or half-integers; inputs violating the triangle
or projection rules return exactly 0.
"""

import math
from fractions import Fraction

__all__ = [
    "clebsch_gordan",
    "clebsch_gordan_exact",
    "wigner_3j",
    "wigner_6j",
    "wigner_6j_exact",
]


def _half_int(x, name):
    f = Fraction(x).limit_denominator(2)
    if f != Fraction(x) or f.denominator not in (1, 2):
        raise ValueError(f"{name}={x} is not an integer or half-integer")
    return f


def _fact(f):
    """Factorial of a Fraction that must be a non-negative integer."""
    if f.denominator != 1 or f < 0:
        raise ValueError(f"factorial of non-integer or negative value {f}")
    return Fraction(math.factorial(int(f)))


def _is_int(f):
    return f.denominator == 1


def _triangle_ok(a, b, c):
    return abs(a - b) <= c <= a + b and _is_int(a + b + c)


def _triangle_delta_sq(a, b, c):
    """Delta(abc)^2 as an exact rational."""
    return (_fact(a + b - c) * _fact(a - b + c) * _fact(-a + b + c)
            / _fact(a + b + c + 1))


def clebsch_gordan_exact(j1, m1, j2, m2, J, M):
    """Exact CG coefficient <j1 m1; j2 m2 | J M> as a pair (s, r).

    The value is s * sqrt(r) with s, r rational (Condon-Shortley phase).
    """
    j1, m1 = _half_int(j1, "j1"), _half_int(m1, "m1")
    j2, m2 = _half_int(j2, "j2"), _half_int(m2, "m2")
    J, M = _half_int(J, "J"), _half_int(M, "M")

    if (M != m1 + m2 or not _triangle_ok(j1, j2, J)
            or abs(m1) > j1 or abs(m2) > j2 or abs(M) > J
            or not _is_int(j1 + m1) or not _is_int(j2 + m2)
            or not _is_int(J + M)):
        return Fraction(0), Fraction(0)

    r = (2 * J + 1) * _triangle_delta_sq(j1, j2, J)
    r *= (_fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2)
          * _fact(J + M) * _fact(J - M))

    s = Fraction(0)
    k_min = int(max(0, j2 - J - m1, j1 - J + m2))
    k_max = int(min(j1 + j2 - J, j1 - m1, j2 + m2))
    for k in range(k_min, k_max + 1):
        den = (_fact(Fraction(k)) * _fact(j1 + j2 - J - k)
               * _fact(j1 - m1 - k) * _fact(j2 + m2 - k)
               * _fact(J - j2 + m1 + k) * _fact(J - j1 - m2 + k))
        s += Fraction((-1) ** k) / den
    return s, r


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """CG coefficient <j1 m1; j2 m2 | J M> as a float (0 if forbidden)."""
    s, r = clebsch_gordan_exact(j1, m1, j2, m2, J, M)
    return float(s) * math.sqrt(float(r))


def wigner_3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3-j symbol, via its relation to the CG coefficient."""
    j1, j2, j3 = _half_int(j1, "j1"), _half_int(j2, "j2"), _half_int(j3, "j3")
    m3f = _half_int(m3, "m3")
    s, r = clebsch_gordan_exact(j1, m1, j2, m2, j3, -m3f)
    if r == 0:
        return 0.0
    phase = (-1) ** int(j1 - j2 - m3f)
    return phase * float(s) * math.sqrt(float(r) / float(2 * j3 + 1))


def wigner_6j_exact(j1, j2, j3, j4, j5, j6):
    """Exact 6-j symbol {j1 j2 j3; j4 j5 j6} as a pair (s, r)."""
    js = [_half_int(j, f"j{i + 1}") for i, j in
          enumerate((j1, j2, j3, j4, j5, j6))]
    j1, j2, j3, j4, j5, j6 = js

    triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)]
    if not all(_triangle_ok(*t) for t in triads):
        return Fraction(0), Fraction(0)

    r = Fraction(1)
    for t in triads:
        r *= _triangle_delta_sq(*t)

    quads = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4]
    sums = [sum(t) for t in triads]
    t_min = int(max(sums))
    t_max = int(min(quads))
    s = Fraction(0)
    for t in range(t_min, t_max + 1):
        tf = Fraction(t)
        den = Fraction(1)
        for v in sums:
            den *= _fact(tf - v)
        for v in quads:
            den *= _fact(v - tf)
        s += Fraction((-1) ** t) * _fact(tf + 1) / den
    return s, r


def wigner_6j(j1, j2, j3, j4, j5, j6):
    """6-j symbol {j1 j2 j3; j4 j5 j6} as a float (0 if forbidden)."""
    s, r = wigner_6j_exact(j1, j2, j3, j4, j5, j6)
    return float(s) * math.sqrt(float(r))
