"""Coupling constants and tailored Hamiltonians of the coupled system.

The two-level system (charge qubit) and the mechanical mode live on a
``2 * dim`` composite space ordered qubit-major: amplitude index
``q * dim + n`` refers to qubit level ``q`` and Fock level ``n``. Composite
operators are built with ``np.kron(qubit_op, mode_op)``.

Magnetic-tip geometry enters through the field at the loop
``B0 = mu0 m / (2 pi r^3)`` and its gradient ``C = 3 B0 / r``; the loop flux
then couples the qubit to the mode position with flux angle
``phi = -pi S C z0 / Phi0``. Alternatively a measured gradient and zero-point
amplitude can be supplied directly, bypassing the dipole formula.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InstabilityRegime, InvalidDevice
from .hilbert import ladder_ops

MU0 = 4e-7 * np.pi  # T m / A
FLUX_QUANTUM = 2.067833848e-15  # Wb

SIGMA_X = np.array([[0, 1], [1, 0]], complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], complex)
QUBIT_PLUS = np.array([1, 1], complex) / np.sqrt(2)
QUBIT_MINUS = np.array([1, -1], complex) / np.sqrt(2)


@dataclass(frozen=True)
class DeviceParams:
    """Physical inputs of the device; frequencies in rad/s, hbar = 1.

    Geometry fields (tip_moment, tip_distance, loop_area) feed the dipole
    formula. ``field_gradient`` (T/m) together with ``zero_point`` (m)
    bypasses it, reproducing estimates quoted directly as |dB_z/dz| * z0.
    """

    josephson_energy: float  # E_J, rad/s
    charging_energy: float  # E_C, rad/s
    gate_charge: float  # n_g
    external_field: float  # B_x, T
    cantilever_freq: float  # omega, rad/s
    cantilever_mass: float  # kg, with hbar = 1 in z0 = 1/sqrt(2 m omega)
    tip_moment: float = 0.0  # A m^2
    tip_distance: float = 0.0  # m
    loop_area: float = 0.0  # m^2
    field_gradient: float | None = None  # T/m, direct override
    zero_point: float | None = None  # m, direct override
    vacuum_permeability: float = MU0
    flux_quantum: float = FLUX_QUANTUM


@dataclass(frozen=True)
class CouplingSet:
    """Derived coupling parameters of the coupled system.

    ``linear_coupling = E_J * phi`` and ``quadratic_coupling = E_J phi^2 / 2``
    so ``quadratic/|linear| = |phi|/2`` exactly.
    """

    tip_field: float  # B0, T
    field_gradient: float  # C, T/m
    zero_point: float  # z0, m
    flux_offset: float  # phi0, rad
    flux_coupling: float  # phi, rad
    qubit_freq: float  # omega0, rad/s
    linear_coupling: float  # g, rad/s
    quadratic_coupling: float  # g', rad/s
    josephson_energy: float  # E_J, rad/s

    @classmethod
    def from_flux(cls, josephson_energy, flux_coupling, qubit_freq=0.0,
                  flux_offset=0.0):
        """Couplings from a flux angle alone, geometry left unspecified."""
        return cls(
            tip_field=0.0,
            field_gradient=0.0,
            zero_point=0.0,
            flux_offset=flux_offset,
            flux_coupling=flux_coupling,
            qubit_freq=qubit_freq,
            linear_coupling=josephson_energy * flux_coupling,
            quadratic_coupling=josephson_energy * flux_coupling ** 2 / 2,
            josephson_energy=josephson_energy,
        )

    @classmethod
    def from_couplings(cls, linear=0.0, quadratic=0.0, qubit_freq=0.0):
        """Bare couplings for scenario runs where geometry is irrelevant."""
        return cls(
            tip_field=0.0,
            field_gradient=0.0,
            zero_point=0.0,
            flux_offset=0.0,
            flux_coupling=0.0,
            qubit_freq=qubit_freq,
            linear_coupling=linear,
            quadratic_coupling=quadratic,
            josephson_energy=0.0,
        )


def derive_couplings(dev):
    """Coupling set from device parameters.

    With ``field_gradient`` set, that value is used for C and ``zero_point``
    (required, or derived from mass and frequency) for z0. Otherwise both
    come from the dipole geometry and 1/sqrt(2 m omega).
    """
    if dev.cantilever_freq <= 0:
        raise InvalidDevice("cantilever frequency must be positive")

    if dev.zero_point is not None:
        z0 = dev.zero_point
        if z0 <= 0:
            raise InvalidDevice("zero-point amplitude must be positive")
    else:
        if dev.cantilever_mass <= 0:
            raise InvalidDevice("cantilever mass must be positive")
        z0 = 1.0 / np.sqrt(2.0 * dev.cantilever_mass * dev.cantilever_freq)

    if dev.tip_moment and dev.tip_distance <= 0:
        raise InvalidDevice("tip distance must be positive")
    if dev.tip_distance > 0:
        b0 = dev.vacuum_permeability * dev.tip_moment / (
            2 * np.pi * dev.tip_distance ** 3)
        grad_geo = 3 * b0 / dev.tip_distance
    else:
        b0 = 0.0
        grad_geo = 0.0

    if dev.field_gradient is not None:
        grad = dev.field_gradient
    else:
        if dev.tip_distance <= 0:
            raise InvalidDevice(
                "need either tip geometry or a field_gradient override")
        grad = grad_geo

    if dev.loop_area <= 0:
        raise InvalidDevice("loop area must be positive")

    phi0 = np.pi * dev.loop_area * (b0 + dev.external_field) / dev.flux_quantum
    phi = -np.pi * dev.loop_area * grad * z0 / dev.flux_quantum
    return CouplingSet(
        tip_field=b0,
        field_gradient=grad,
        zero_point=z0,
        flux_offset=phi0,
        flux_coupling=phi,
        qubit_freq=8 * dev.charging_energy * (dev.gate_charge - 0.5),
        linear_coupling=dev.josephson_energy * phi,
        quadratic_coupling=dev.josephson_energy * phi ** 2 / 2,
        josephson_energy=dev.josephson_energy,
    )


def _qubit_kron(qubit_op, mode_op):
    return np.kron(qubit_op, mode_op)


def full_hamiltonian(cs, omega, dim):
    """(omega0/2) sz + omega n - E_J cos[phi0 + phi (a + a^dag)] sx.

    The operator cosine is evaluated exactly through the eigendecomposition
    of the quadrature a + a^dag, so the truncated operator carries no series
    error.
    """
    a, adag, num = ladder_ops(dim)
    x = a + adag
    w, v = np.linalg.eigh(x)
    cos_op = (v * np.cos(cs.flux_offset + cs.flux_coupling * w)) @ v.conj().T
    eye = np.eye(dim)
    h = (cs.qubit_freq / 2) * _qubit_kron(SIGMA_Z, eye)
    h = h + omega * _qubit_kron(np.eye(2), num)
    h = h - cs.josephson_energy * _qubit_kron(SIGMA_X, cos_op)
    return h


def linear_hamiltonian(cs, omega, dim):
    """(omega0/2) sz + omega n + g (a + a^dag) sx.

    First-order form of the flux coupling at the cos(phi0) = 0 working
    point (sin branch expanded to first order in phi).
    """
    a, adag, num = ladder_ops(dim)
    eye = np.eye(dim)
    h = (cs.qubit_freq / 2) * _qubit_kron(SIGMA_Z, eye)
    h = h + omega * _qubit_kron(np.eye(2), num)
    h = h + cs.linear_coupling * _qubit_kron(SIGMA_X, a + adag)
    return h


def nonlinear_hamiltonian(cs, omega, dim):
    """omega n + (omega0/2) sz - E_J sx - g' (a + a^dag)^2 sx.

    Second-order form at the cos(phi0) = 1 working point, with the
    quadratic-term sign kept as adopted downstream by the conditional
    Hamiltonians (g_k = -k g').
    """
    a, adag, num = ladder_ops(dim)
    x = a + adag
    eye = np.eye(dim)
    h = omega * _qubit_kron(np.eye(2), num)
    h = h + (cs.qubit_freq / 2) * _qubit_kron(SIGMA_Z, eye)
    h = h - cs.josephson_energy * _qubit_kron(SIGMA_X, eye)
    h = h - cs.quadratic_coupling * _qubit_kron(SIGMA_X, x @ x)
    return h


def conditional_params(k, cs, omega):
    """(omega_k, g_k) of the conditional quadratic Hamiltonian, k = +-1."""
    if k not in (1, -1):
        raise ValueError(f"conditioning branch k must be +1 or -1, got {k}")
    g_k = -k * cs.quadratic_coupling
    return omega + 2 * g_k, g_k


def conditional_hamiltonian(k, cs, omega, dim):
    """H_k = omega_k a^dag a + g_k (a^dag^2 + a^2) on the mode space."""
    omega_k, g_k = conditional_params(k, cs, omega)
    a, adag, num = ladder_ops(dim)
    return omega_k * num + g_k * (adag @ adag + a @ a)


@dataclass(frozen=True)
class ConditionalSpec:
    """Bogoliubov data of one conditional branch.

    ``quasi_freq`` is the diagonalised mode frequency and ``energy_shift``
    the constant dropped when writing the diagonal form.
    """

    k: int
    omega_k: float  # rad/s
    g_k: float  # rad/s
    lam: float  # dimensionless two-photon parameter
    quasi_freq: float  # Omega_k, rad/s
    energy_shift: float  # C_k, rad/s


def diagonalize_conditional(k, cs, omega):
    """Two-photon transform diagonalising H_k; raises in the unstable regime.

    tanh(4 lam) = 2 g_k / omega_k, Omega_k = sqrt(omega_k^2 - 4 g_k^2) and
    C_k = omega_k sinh^2(2 lam) - g_k sinh(4 lam).
    """
    omega_k, g_k = conditional_params(k, cs, omega)
    if omega_k ** 2 <= 4 * g_k ** 2:
        raise InstabilityRegime(
            f"branch k={k}: omega_k^2 = {omega_k ** 2:.4g} <= 4 g_k^2 = "
            f"{4 * g_k ** 2:.4g}; quadratic Hamiltonian unbounded"
        )
    lam = np.arctanh(2 * g_k / omega_k) / 4
    quasi = np.sqrt(omega_k ** 2 - 4 * g_k ** 2)
    shift = omega_k * np.sinh(2 * lam) ** 2 - g_k * np.sinh(4 * lam)
    return ConditionalSpec(
        k=k, omega_k=omega_k, g_k=g_k, lam=float(lam),
        quasi_freq=float(quasi), energy_shift=float(shift),
    )
