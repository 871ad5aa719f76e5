"""Truncated-Fock-space linear algebra for a single bosonic mode.

Conventions used throughout the package:

* hbar = 1; Hamiltonians carry units of angular frequency.
* States are 1-D complex ndarrays of length ``dim``; operators and density
  matrices are ``(dim, dim)`` complex ndarrays.
* The position quadrature is ``x = a + a^dag`` so a coherent state has
  variance 1 in these units (physical ``z = z0 * x``).
* The Wigner function is ``W(xi) = 2 Tr[D(-xi) rho D(xi) exp(i pi n)]``,
  which integrates to ``pi * Tr[rho]`` over the complex plane.

Every state-producing routine monitors the population of the top two Fock
levels and raises :class:`TruncationInsufficient` when the cutoff is too
small to hold the result.
"""

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, TruncationInsufficient

# Population allowed in the top two Fock levels before a state is declared
# unrepresentable at the current cutoff.
TOP_POPULATION_TOL = 1e-8

# Norm a coherent state may lose to truncation before renormalisation.
COHERENT_LOSS_TOL = 1e-6


def ladder_ops(dim):
    """Annihilation, creation and number operators on a dim-level space.

    Returns the triple ``(a, adag, n)`` with the standard matrix elements
    ``a[m-1, m] = sqrt(m)``.
    """
    if dim < 2:
        raise ValueError(f"Fock dimension must be >= 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    adag = a.conj().T
    return a, adag, adag @ a


def fock_state(n, dim):
    """Number state |n> as a length-dim vector."""
    if not 0 <= n < dim:
        raise ValueError(f"Fock index {n} outside [0, {dim})")
    psi = np.zeros(dim, complex)
    psi[n] = 1.0
    return psi


def normalize(psi):
    """Return psi scaled to unit norm."""
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return psi / nrm


def coherent_state(alpha, dim, max_loss=COHERENT_LOSS_TOL):
    """Coherent state |alpha> in a dim-level truncated basis.

    Amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!) are renormalised over
    the truncated basis. Raises TruncationInsufficient when the weight lost
    to truncation exceeds ``max_loss``.
    """
    alpha = complex(alpha)
    amps = np.empty(dim, complex)
    amps[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    kept = float(np.sum(np.abs(amps) ** 2))
    loss = 1.0 - kept
    if loss > max_loss:
        raise TruncationInsufficient(
            f"coherent state |alpha|={abs(alpha):.3g} loses {loss:.3e} of its "
            f"norm at dim={dim}",
            loss=loss,
        )
    return amps / np.sqrt(kept)


def projector(psi):
    """Pure-state density matrix |psi><psi|."""
    return np.outer(psi, psi.conj())


def _unitary_from_generator(gen):
    """exp(gen) for an anti-Hermitian generator, via eigendecomposition.

    ``1j * gen`` is Hermitian, so exp(gen) = V exp(-i w) V^dag with
    (w, V) its eigensystem. Exactly unitary up to rounding.
    """
    w, v = np.linalg.eigh(1j * gen)
    return (v * np.exp(-1j * w)) @ v.conj().T


def displacement_op(alpha, dim):
    """Displacement operator D(alpha) = exp(alpha a^dag - alpha* a).

    The cutoff must leave headroom for the displaced vacuum: the documented
    rule |alpha|^2 + 6 |alpha| + 10 <= dim is enforced. The matrix is exact
    on the low half of the basis; elements near the truncation corner are
    distorted as in any finite representation.
    """
    alpha = complex(alpha)
    r = abs(alpha)
    if r ** 2 + 6 * r + 10 > dim:
        raise TruncationInsufficient(
            f"displacement |alpha|={r:.3g} needs dim >= "
            f"{r ** 2 + 6 * r + 10:.1f}, got {dim}"
        )
    a, adag, _ = ladder_ops(dim)
    return _unitary_from_generator(alpha * adag - np.conj(alpha) * a)


def rotation_op(theta, dim):
    """Phase-space rotation R(theta) = exp(-i theta a^dag a)."""
    return np.diag(np.exp(-1j * theta * np.arange(dim))).astype(complex)


def two_photon_op(lam, dim):
    """Two-photon (Bogoliubov) unitary exp(-lambda (a^2 - a^dag^2)).

    Conjugation satisfies exp(-S) a exp(S) = a cosh(2 lam) - a^dag sinh(2 lam)
    on the low part of the basis. |lam| must stay below 1 and the squeezed
    vacuum it produces must fit the cutoff.
    """
    lam = float(lam)
    if abs(lam) >= 1.0:
        raise TruncationInsufficient(
            f"two-photon parameter |lambda|={abs(lam):.3g} >= 1 exceeds the "
            "documented truncation safety bound"
        )
    a, adag, _ = ladder_ops(dim)
    u = _unitary_from_generator(-lam * (a @ a - adag @ adag))
    pop = float(np.sum(np.abs(u[-2:, 0]) ** 2))
    if pop > TOP_POPULATION_TOL:
        raise TruncationInsufficient(
            f"squeezed vacuum at lambda={lam:.3g} populates the top levels "
            f"({pop:.3e}) at dim={dim}",
            loss=pop,
        )
    return u


def evolve_unitary(ham, state, t):
    """Evolve a state vector or density matrix under exp(-i H t).

    Uses the eigendecomposition of the (Hermitian) Hamiltonian, so the
    propagation is exact for the truncated operator.
    """
    w, v = np.linalg.eigh(ham)
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    if state.ndim == 1:
        return u @ state
    return u @ state @ u.conj().T


def expectation(op, state):
    """<psi|A|psi> for a vector or Tr[A rho] for a density matrix."""
    if state.ndim == 1:
        return complex(state.conj() @ op @ state)
    return complex(np.trace(op @ state))


def purity(rho):
    """Tr[rho^2]."""
    return float(np.real(np.trace(rho @ rho)))


def top_population(state, levels=2):
    """Total population of the highest ``levels`` Fock levels."""
    if state.ndim == 1:
        return float(np.sum(np.abs(state[-levels:]) ** 2))
    return float(np.real(np.trace(state[-levels:, -levels:])))


def _sqrt_psd(mat):
    w, v = np.linalg.eigh(mat)
    return (v * np.sqrt(np.clip(w.real, 0.0, None))) @ v.conj().T


def fidelity(rho, sigma):
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    For a pure sigma = |psi><psi| this reduces to <psi|rho|psi>, which is
    used directly when either argument is numerically pure (it avoids the
    half-precision loss of matrix square roots on rank-deficient states).
    The general case sums the singular values of sqrt(sigma) sqrt(rho).
    """
    if rho.shape != sigma.shape:
        raise DimensionMismatch(
            f"fidelity of shapes {rho.shape} and {sigma.shape}"
        )
    for pure, other in ((sigma, rho), (rho, sigma)):
        if abs(np.trace(pure @ pure).real - 1.0) < 1e-12:
            w, v = np.linalg.eigh(pure)
            psi = v[:, -1]
            return float((psi.conj() @ other @ psi).real)
    sv = np.linalg.svd(_sqrt_psd(sigma) @ _sqrt_psd(rho), compute_uv=False)
    return float(np.sum(sv) ** 2)


def trace_distance(rho, sigma):
    """(1/2) Tr |rho - sigma|."""
    if rho.shape != sigma.shape:
        raise DimensionMismatch(
            f"trace distance of shapes {rho.shape} and {sigma.shape}"
        )
    ev = np.linalg.eigvalsh(rho - sigma)
    return float(0.5 * np.sum(np.abs(ev)))


def _displaced_parity_sum(rho, xi_points):
    """2 Tr[rho D(2 xi) Pi] evaluated at each point of a flat complex array.

    Uses the identity D(xi) Pi D(-xi) = D(2 xi) Pi and exact matrix elements
    of the displacement operator, generated by the stable three-term
    recurrence for normalised Laguerre functions. The projection onto the
    truncated space is exact, so accuracy is limited only by how well rho
    fits the cutoff.
    """
    dim = rho.shape[0]
    alpha = 2.0 * np.asarray(xi_points, complex)
    x = np.abs(alpha) ** 2
    signs = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)

    total = np.zeros(alpha.shape, complex)
    alpha_pow = np.ones(alpha.shape, complex)
    for k in range(dim):
        diag = np.diagonal(rho, offset=k)
        if k:
            alpha_pow = alpha_pow * alpha
        if not np.any(diag):
            continue
        # g_n = sqrt(n!/(n+k)!) e^{-x/2} L_n^{(k)}(x); |alpha^k g_n| <= 1
        g_prev = np.zeros(alpha.shape)
        g_curr = np.exp(-x / 2 - 0.5 * gammaln(k + 1))
        acc = signs[0] * diag[0] * g_curr
        for n in range(dim - k - 1):
            denom = np.sqrt((n + 1.0) * (n + k + 1.0))
            g_next = ((2 * n + k + 1 - x) / denom) * g_curr - np.sqrt(
                n * (n + k) / ((n + 1.0) * (n + k + 1.0))
            ) * g_prev
            g_prev, g_curr = g_curr, g_next
            acc = acc + signs[n + 1] * diag[n + 1] * g_curr
        if k == 0:
            total += acc
        else:
            total += 2.0 * (alpha_pow * acc).real
    return 2.0 * total


def wigner_numeric(rho, xi):
    """W(xi) = 2 Tr[D(-xi) rho D(xi) exp(i pi a^dag a)] from the Fock matrix.

    rho must be well contained in the cutoff (top-two-level population below
    TOP_POPULATION_TOL) and xi must lie inside the numerically safe disk
    |xi|^2 < 300 where the Gaussian kernels stay in double range.
    """
    rho = np.asarray(rho, complex)
    if abs(xi) ** 2 >= 300.0:
        raise TruncationInsufficient(
            f"phase-space point |xi|={abs(xi):.3g} outside the safe disk"
        )
    pop = top_population(rho)
    if pop > TOP_POPULATION_TOL:
        raise TruncationInsufficient(
            f"density matrix populates the top Fock levels ({pop:.3e}); "
            "raise dim before evaluating the Wigner function",
            loss=pop,
        )
    val = _displaced_parity_sum(rho, np.array([complex(xi)]))[0]
    return float(val.real)


def wigner_grid(rho, xs, ys):
    """Wigner function on a rectangular grid, returned with shape (len(ys), len(xs)).

    Same definition and preconditions as :func:`wigner_numeric`; the grid
    evaluation shares one pass of the Laguerre recurrence across all points.
    """
    rho = np.asarray(rho, complex)
    pop = top_population(rho)
    if pop > TOP_POPULATION_TOL:
        raise TruncationInsufficient(
            f"density matrix populates the top Fock levels ({pop:.3e}); "
            "raise dim before evaluating the Wigner function",
            loss=pop,
        )
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    if np.max(np.abs(pts)) ** 2 >= 300.0:
        raise TruncationInsufficient("grid extends outside the safe disk")
    vals = _displaced_parity_sum(rho, pts)
    return vals.real.reshape(len(ys), len(xs))
