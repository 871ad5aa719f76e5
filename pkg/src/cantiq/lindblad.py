"""Open-system dynamics: thermal master equation, frame transforms,
second-moment ODEs, steady states and the squeezing critical temperature.

The master equation is integrated in the form rho' = i [rho, H] + L[rho]
with the thermal dissipator

    L[rho] = (gamma/2)(n+1)(2 a rho a^dag - a^dag a rho - rho a^dag a)
           + (gamma/2) n   (2 a^dag rho a - a a^dag rho - rho a a^dag).

Temperatures share units with frequencies (k_B = 1); the occupancy is
n = 1/(exp(omega/T) - 1) with n = 0 exactly at T = 0.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ._integrate import adaptive_rk
from .errors import (
    InstabilityRegime,
    InvalidCoupling,
    NegativeDecay,
    NonPhysicalMoments,
    TruncationInsufficient,
)
from .hilbert import (
    TOP_POPULATION_TOL,
    displacement_op,
    ladder_ops,
    rotation_op,
    trace_distance,
)
from .model import conditional_params

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-10


def thermal_occupancy(omega, temperature):
    """Bose occupancy 1/(exp(omega/T) - 1); exactly 0 at T = 0."""
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0.0:
        return 0.0
    return 1.0 / np.expm1(omega / temperature)


@dataclass(frozen=True)
class BathParams:
    """Thermal bath: decay rate, temperature and derived occupancy."""

    decay_rate: float  # gamma, rad/s
    temperature: float  # energy units, k_B = 1
    n_thermal: float  # occupancy at the mode frequency

    def __post_init__(self):
        if self.decay_rate < 0:
            raise NegativeDecay(f"decay rate {self.decay_rate} < 0")
        if self.temperature < 0 or self.n_thermal < 0:
            raise ValueError("temperature and occupancy must be non-negative")

    @classmethod
    def for_mode(cls, decay_rate, temperature, omega):
        """Bath with the occupancy evaluated at the mode frequency."""
        return cls(decay_rate, temperature,
                   thermal_occupancy(omega, temperature))


class _LindbladRhs:
    """Precomputed right-hand side of the master equation.

    The ladder sandwiches are applied by index shifts instead of matrix
    products; only the Hamiltonian commutator uses dense matmuls.
    """

    def __init__(self, ham, bath, dim):
        self.gamma = bath.decay_rate
        self.nbar = bath.n_thermal
        n_diag = np.arange(dim, dtype=float)
        # diag of the truncated a a^dag: the corner is 0, which keeps the
        # dissipator exactly traceless on the truncated space
        aad_diag = np.append(n_diag[1:], 0.0)
        self.down = self.gamma * (self.nbar + 1)
        self.up = self.gamma * self.nbar
        decay = 0.5 * (self.down * n_diag + self.up * aad_diag)
        self.ham = ham
        self.decay_col = decay[:, None]
        self.decay_row = decay[None, :]
        self.s_down = np.sqrt(np.outer(n_diag + 1.0, n_diag + 1.0))[:-1, :-1]
        self.s_up = np.sqrt(np.outer(n_diag, n_diag))[1:, 1:]

    def __call__(self, t, rho):
        out = 1j * (rho @ self.ham - self.ham @ rho)
        out -= self.decay_col * rho + rho * self.decay_row
        if self.down:
            out[:-1, :-1] += self.down * self.s_down * rho[1:, 1:]
        if self.up:
            out[1:, 1:] += self.up * self.s_up * rho[:-1, :-1]
        return out


def dissipator(rho, bath):
    """Thermal dissipator L[rho]; traceless by construction."""
    dim = rho.shape[0]
    zero_h = np.zeros((dim, dim))
    return _LindbladRhs(zero_h, bath, dim)(0.0, np.asarray(rho, complex))


def evolve_master(ham, rho0, bath, t, tol=DEFAULT_RTOL, atol=None):
    """Integrate rho' = i[rho, H] + L[rho] from rho0 over a span t.

    Adaptive embedded Runge-Kutta with relative tolerance ``tol`` (absolute
    tolerance ``tol * 1e-2`` unless given). The state is re-symmetrised
    after every accepted step and the top-two-level population is monitored;
    TruncationInsufficient aborts the run when the state climbs the cutoff.
    """
    ham = np.asarray(ham, complex)
    rho0 = np.asarray(rho0, complex)
    dim = rho0.shape[0]
    herm = np.abs(ham - ham.conj().T).max()
    if herm > 1e-10 * max(1.0, np.abs(ham).max()):
        raise ValueError(f"Hamiltonian not Hermitian (residual {herm:.3e})")
    if atol is None:
        atol = tol * 1e-2
    rhs = _LindbladRhs(ham, bath, dim)

    def post_accept(_t, rho):
        rho = 0.5 * (rho + rho.conj().T)
        pop = float(np.real(rho[-1, -1] + rho[-2, -2]))
        if pop > TOP_POPULATION_TOL:
            raise TruncationInsufficient(
                f"state populates the top Fock levels ({pop:.3e}) at "
                f"t={_t:.4g}; increase dim",
                loss=pop,
            )
        return rho

    return adaptive_rk(rhs, rho0, float(t), rtol=tol, atol=atol,
                       post_accept=post_accept)


def evolve_master_trajectory(ham, rho0, bath, times, tol=DEFAULT_RTOL):
    """States at each time of an increasing list, integrating piecewise."""
    out = []
    rho = np.asarray(rho0, complex)
    t_prev = 0.0
    for t in times:
        if t < t_prev:
            raise ValueError("times must be non-decreasing")
        if t > t_prev:
            rho = evolve_master(ham, rho, bath, t - t_prev, tol=tol)
            t_prev = t
        out.append(rho.copy())
    return out


def frame_alpha(g_s, gamma, omega, t):
    """Displacement label of the co-moving frame.

    Solves alpha' + i g_s exp(i omega t) + (gamma/2) alpha = 0 with
    alpha(0) = 0.
    """
    denom = gamma / 2 + 1j * omega
    if denom == 0:
        raise ValueError("gamma/2 + i omega must be nonzero")
    return (1j * g_s / denom) * (np.exp(-gamma * t / 2) - np.exp(1j * omega * t))


@dataclass(frozen=True)
class FrameParams:
    """Rotation angle and displacement label of the co-moving frame."""

    angle: float  # theta(t) = omega t
    label: complex  # alpha(t)


def frame_at(g_s, gamma, omega, t):
    return FrameParams(angle=omega * t, label=frame_alpha(g_s, gamma, omega, t))


def apply_frame(rho, frame, dim=None):
    """Map a frame-picture state back: R(theta) D(alpha) rho D^dag R^dag."""
    if dim is None:
        dim = rho.shape[0]
    d = displacement_op(frame.label, dim)
    r = rotation_op(frame.angle, dim)
    return r @ d @ rho @ d.conj().T @ r.conj().T


def transform_check(rho0, g_s, omega, bath, t, tol=DEFAULT_RTOL):
    """Trace distance between direct and frame-transformed evolution.

    The driven-mode master equation is integrated directly, and separately
    the same initial state is evolved under pure thermal decay and mapped
    back with the rotation + displacement frame. Exact equivalence makes the
    returned discrepancy an end-to-end integration-error gauge.
    """
    rho0 = np.asarray(rho0, complex)
    dim = rho0.shape[0]
    a, adag, num = ladder_ops(dim)
    h_driven = omega * num + g_s * (a + adag)
    direct = evolve_master(h_driven, rho0, bath, t, tol=tol)

    decayed = evolve_master(np.zeros((dim, dim)), rho0, bath, t, tol=tol)
    mapped = apply_frame(decayed, frame_at(g_s, bath.decay_rate, omega, t))
    return trace_distance(direct, mapped)


@dataclass(frozen=True)
class MomentVector:
    """First and second moments <a>, <a^dag>, <a^2>, <a^dag^2>, <a^dag a>."""

    m_a: complex = 0.0
    m_adag: complex = 0.0
    m_a2: complex = 0.0
    m_adag2: complex = 0.0
    m_n: complex = 0.0

    @classmethod
    def vacuum(cls):
        return cls()

    @classmethod
    def coherent(cls, alpha):
        alpha = complex(alpha)
        return cls(alpha, np.conj(alpha), alpha ** 2,
                   np.conj(alpha) ** 2, abs(alpha) ** 2)

    @classmethod
    def thermal(cls, nbar):
        return cls(m_n=nbar)

    def to_array(self):
        return np.array([self.m_a, self.m_adag, self.m_a2,
                         self.m_adag2, self.m_n], complex)

    @classmethod
    def from_array(cls, arr):
        return cls(*map(complex, arr))

    def conjugate_defect(self):
        """How far the vector is from the Hermitian-symmetric manifold."""
        return max(
            abs(self.m_adag - np.conj(self.m_a)),
            abs(self.m_adag2 - np.conj(self.m_a2)),
            abs(self.m_n.imag),
        )


def moment_matrix(k, cs, omega, bath):
    """Linear system M' = A M + b of the five coupled moment equations."""
    omega_k, g_k = conditional_params(k, cs, omega)
    gam = bath.decay_rate
    a = np.zeros((5, 5), complex)
    b = np.zeros(5, complex)
    a[0, 0] = -1j * omega_k - gam / 2
    a[0, 1] = -2j * g_k
    a[1, 1] = 1j * omega_k - gam / 2
    a[1, 0] = 2j * g_k
    a[2, 2] = -(gam + 2j * omega_k)
    a[2, 4] = -4j * g_k
    b[2] = -2j * g_k
    a[3, 3] = -(gam - 2j * omega_k)
    a[3, 4] = 4j * g_k
    b[3] = 2j * g_k
    a[4, 4] = -gam
    a[4, 3] = -2j * g_k
    a[4, 2] = 2j * g_k
    b[4] = gam * bath.n_thermal
    return a, b


def moment_rhs(moments, k, cs, omega, bath):
    """Time derivative of the moment vector under the conditional dynamics."""
    a, b = moment_matrix(k, cs, omega, bath)
    return MomentVector.from_array(a @ moments.to_array() + b)


def evolve_moments(m0, k, cs, omega, bath, t, tol=DEFAULT_RTOL,
                   method="adaptive"):
    """Propagate the moment vector over a span t.

    ``method='adaptive'`` uses the embedded Runge-Kutta pair;
    ``method='exact'`` exponentiates the augmented linear system and serves
    as a self-check of the integrator.
    """
    a, b = moment_matrix(k, cs, omega, bath)
    y0 = m0.to_array()
    if method == "exact":
        aug = np.zeros((6, 6), complex)
        aug[:5, :5] = a
        aug[:5, 5] = b
        z = expm(aug * t)
        return MomentVector.from_array(z[:5, :5] @ y0 + z[:5, 5])
    if method != "adaptive":
        raise ValueError(f"unknown method {method!r}")
    y = adaptive_rk(lambda _t, v: a @ v + b, y0, float(t),
                    rtol=tol, atol=tol * 1e-2)
    return MomentVector.from_array(y)


def evolve_moments_trajectory(m0, k, cs, omega, bath, times, tol=DEFAULT_RTOL,
                              method="adaptive"):
    """Moment vectors at each time of an increasing list."""
    a, b = moment_matrix(k, cs, omega, bath)
    out = []
    y = m0.to_array()
    t_prev = 0.0
    for t in times:
        if t < t_prev:
            raise ValueError("times must be non-decreasing")
        if t > t_prev:
            if method == "exact":
                aug = np.zeros((6, 6), complex)
                aug[:5, :5] = a
                aug[:5, 5] = b
                z = expm(aug * (t - t_prev))
                y = z[:5, :5] @ y + z[:5, 5]
            else:
                y = adaptive_rk(lambda _t, v: a @ v + b, y, t - t_prev,
                                rtol=tol, atol=tol * 1e-2)
            t_prev = t
        out.append(MomentVector.from_array(y))
    return out


def position_variance(moments):
    """(Delta z)^2 / z0^2 from the moment vector.

    <a^2> - <a>^2 + <a^dag^2> - <a^dag>^2 + 2 <a^dag a> - 2 <a^dag><a> + 1,
    real for conjugate-symmetric input.
    """
    m = moments
    val = (m.m_a2 - m.m_a ** 2 + m.m_adag2 - m.m_adag ** 2
           + 2 * m.m_n - 2 * m.m_adag * m.m_a + 1.0)
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        raise NonPhysicalMoments(
            f"variance has imaginary residue {val.imag:.3e}; "
            "moment vector is not conjugate-symmetric"
        )
    if val.real < -1e-9:
        raise NonPhysicalMoments(f"negative variance {val.real:.3e}")
    return float(val.real)


def _check_steady_stability(k, cs, omega, bath):
    omega_k, g_k = conditional_params(k, cs, omega)
    denom = bath.decay_rate ** 2 + 4 * omega_k ** 2 - 16 * g_k ** 2
    if denom <= 0 or omega_k ** 2 <= 4 * g_k ** 2:
        raise InstabilityRegime(
            f"branch k={k} has no stable steady state "
            f"(gamma^2 + 4 omega_k^2 - 16 g_k^2 = {denom:.4g})"
        )
    return omega_k, g_k, denom


def steady_moments(k, cs, omega, bath):
    """Closed-form steady-state moment vector."""
    omega_k, g_k, denom = _check_steady_stability(k, cs, omega, bath)
    gam = bath.decay_rate
    nb = bath.n_thermal
    m_a2 = -2 * g_k * (2 * nb + 1) * (2 * omega_k + 1j * gam) / denom
    m_n = nb + 8 * g_k ** 2 * (2 * nb + 1) / denom
    return MomentVector(0.0, 0.0, m_a2, np.conj(m_a2), m_n)


def steady_moments_numeric(k, cs, omega, bath):
    """Steady state from the 5x5 linear solve A M = -b (oracle route)."""
    _check_steady_stability(k, cs, omega, bath)
    a, b = moment_matrix(k, cs, omega, bath)
    return MomentVector.from_array(np.linalg.solve(a, -b))


def steady_variance(k, cs, omega, bath):
    """Closed-form steady-state position variance in units of z0^2."""
    omega_k, g_k, denom = _check_steady_stability(k, cs, omega, bath)
    gam = bath.decay_rate
    nb = bath.n_thermal
    return (2 * nb + 1) * (gam ** 2 + 4 * omega_k * (omega_k - 2 * g_k)) / denom


def critical_temperature(gamma, omega, gprime):
    """Temperature where the k=-1 steady variance crosses the vacuum value.

    T_c / omega = 1 / ln(gamma^2 / (4 omega g') + omega / g' + 3).
    """
    if gprime <= 0:
        raise InvalidCoupling(f"quadratic coupling must be positive, got {gprime}")
    return omega / np.log(gamma ** 2 / (4 * omega * gprime) + omega / gprime + 3)
