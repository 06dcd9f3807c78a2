"""Small dense Hermitian linear algebra: eigendecomposition and propagators.

All Hamiltonian entries are angular frequencies (rad/s).  The analytic
3x3 eigensolver uses the closed-form real-root (Shengjin) solution of the
cubic characteristic polynomial of the single-pulse blockade Hamiltonian;
``eig_numeric`` is the general-purpose numeric route used to cross-check it.
"""

from dataclasses import dataclass

import numpy as np

from .angular import clebsch_gordan, wigner_3j, wigner_6j  # noqa: F401

HERMITICITY_RTOL = 1e-12
ARCCOS_CLAMP_TOL = 1e-9


def dagger(a):
    return np.conj(np.asarray(a).T)


def is_hermitian(h, rtol=HERMITICITY_RTOL):
    h = np.asarray(h)
    scale = max(np.abs(h).max(), 1e-300)
    return np.abs(h - dagger(h)).max() < rtol * scale


def assert_hermitian(h, rtol=HERMITICITY_RTOL):
    if not is_hermitian(h, rtol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return h


def is_unitary(u, tol=1e-10):
    u = np.asarray(u)
    return np.abs(dagger(u) @ u - np.eye(u.shape[0])).max() < tol


@dataclass(frozen=True)
class ShengjinCoefficients:
    """Closed-form cubic quantities for the 3x3 blockade Hamiltonian."""

    a_coeff: float      # script-A, rad/s
    b_coeff: float      # script-B, (rad/s)^3
    theta: float        # rad, in [0, pi/3]
    degenerate: bool    # script-A == 0: all three eigenvalues coincide


def shengjin_coefficients(omega, delta, v):
    """Cubic solution quantities for eigenvalues of the |11> Hamiltonian.

    ``omega`` may be complex; only its magnitude enters.  The cross term
    in script-A is V*Delta: that is what the characteristic polynomial of
    the Hamiltonian gives, and it is validated against ``eig_numeric``.
    """
    w2 = abs(omega) ** 2
    a_sq = v**2 + 3.0 * (w2 + delta**2 + v * delta)
    a = np.sqrt(max(a_sq, 0.0))
    if a == 0.0:
        return ShengjinCoefficients(0.0, 0.0, 0.0, True)
    s = v + 3.0 * delta
    b = (27.0 * w2 * (v / 2.0 + delta)
         + 9.0 * s * (2.0 * delta**2 + v * delta - w2)
         - 2.0 * s**3)
    x = b / (2.0 * a**3)
    if abs(x) > 1.0:
        if abs(x) > 1.0 + ARCCOS_CLAMP_TOL:
            raise ValueError(f"arccos argument {x} outside [-1, 1]")
        x = np.clip(x, -1.0, 1.0)
    theta = np.arccos(x) / 3.0
    return ShengjinCoefficients(float(a), float(b), float(theta), False)


def eig3_shengjin(omega, delta, v):
    """Eigenvalues (eps1, eps2, eps3) of the 3x3 |11> Hamiltonian, rad/s.

    eps1 = Delta + (V - 2A cos(theta))/3,
    eps2/3 = Delta + (V + 2A cos(theta +- pi/3))/3.
    In the degenerate A = 0 case all three equal Delta + V/3 (see
    ``shengjin_coefficients(...).degenerate``).
    """
    c = shengjin_coefficients(omega, delta, v)
    if c.degenerate:
        return np.full(3, delta + v / 3.0)
    a, th = c.a_coeff, c.theta
    return np.array([
        delta + (v - 2.0 * a * np.cos(th)) / 3.0,
        delta + (v + 2.0 * a * np.cos(th + np.pi / 3.0)) / 3.0,
        delta + (v + 2.0 * a * np.cos(th - np.pi / 3.0)) / 3.0,
    ])


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self):
        return self.values.size


def eig_numeric(h):
    """Eigendecomposition of a Hermitian matrix with a fixed convention.

    Eigenvalues ascend; each eigenvector's first component of significant
    magnitude is made real and positive so results are deterministic.
    """
    h = np.asarray(h, dtype=complex)
    assert_hermitian(h)
    values, vectors = np.linalg.eigh(h)
    for k in range(values.size):
        col = vectors[:, k]
        idx = np.argmax(np.abs(col) > 1e-8)
        phase = col[idx] / abs(col[idx])
        vectors[:, k] = col / phase
    return EigenSystem(values=values, vectors=vectors)


def _as_eigensystem(h):
    return h if isinstance(h, EigenSystem) else eig_numeric(h)


def propagate_const(h, psi, t):
    """Evolve ``psi`` under a constant Hermitian ``h`` for time ``t``.

    ``h`` may be a matrix or a precomputed ``EigenSystem``.  Returns
    sum_k exp(-i lam_k t) v_k <v_k|psi>.
    """
    es = _as_eigensystem(h)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[0] != es.dim:
        raise ValueError("dimension mismatch between Hamiltonian and state")
    amps = dagger(es.vectors) @ psi
    return es.vectors @ (np.exp(-1j * es.values * t) * amps.T).T \
        if psi.ndim > 1 else es.vectors @ (np.exp(-1j * es.values * t) * amps)


def default_dt(max_eigenvalue, total_time, n_min=5000):
    """Step size: min of 2pi/(50 max|eig|) and total_time/n_min."""
    if max_eigenvalue > 0:
        return min(2.0 * np.pi / (50.0 * max_eigenvalue),
                   total_time / n_min)
    return total_time / n_min


def propagate_steps(h_of_t, psi, t0, t1, dt):
    """Midpoint-exponential stepping for a time-dependent Hamiltonian.

    ``h_of_t`` maps a time (s) to a Hermitian matrix.  Each step applies
    exp(-i H(t + dt/2) dt); this is the second-order Magnus rule.  A
    ``dt`` longer than the interval is clamped to a single step.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    psi = np.asarray(psi, dtype=complex)
    span = t1 - t0
    if span <= 0:
        return psi.copy()
    n = max(1, int(np.ceil(span / dt - 1e-12)))
    step = span / n
    t = t0
    for _ in range(n):
        h = np.asarray(h_of_t(t + step / 2.0), dtype=complex)
        values, vectors = np.linalg.eigh(h)
        amps = np.conj(vectors.T) @ psi
        psi = vectors @ (np.exp(-1j * values * step) * amps.T).T \
            if psi.ndim > 1 else vectors @ (np.exp(-1j * values * step) * amps)
        t += step
    return psi
