"""Closed-form results: exponential factorisation, conditional-displacement
evolution, cat preparation by qubit measurement, the exact zero-temperature
dissipative cat and its Wigner function, and the unitary squeezing variance.

Cat states are carried symbolically as a pair of weighted coherent dyads
(:class:`CatRecord`); :func:`realize` bridges to a dense Fock-basis density
matrix when a numerical state is needed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBranch, NegativeDecay, TruncationInsufficient
from .hilbert import TOP_POPULATION_TOL, coherent_state, top_population
from .lindblad import frame_alpha
from .model import diagonalize_conditional


@dataclass(frozen=True)
class BchFactors:
    """Factors of exp[theta(b1 a + b2 a^dag a + b3 a^dag)] =
    exp(f4) exp(f1 a^dag) exp(f2 a^dag a) exp(f3 a)."""

    f1: complex
    f2: complex
    f3: complex
    f4: complex


def bch_factorize(theta, b1, b2, b3):
    """Normal-ordered factorisation of a linear-plus-number exponent.

    f1 = b3 (e^z - 1)/b2, f2 = z, f3 = b1 (e^z - 1)/b2 and
    f4 = b1 b3 (e^z - z - 1)/b2^2 with z = b2 theta. Below |z| = 1e-8 the
    removable singularity is taken through its second-order series to avoid
    catastrophic cancellation.
    """
    theta = complex(theta)
    b1, b2, b3 = complex(b1), complex(b2), complex(b3)
    z = b2 * theta
    if abs(z) < 1e-8:
        ramp = theta * (1.0 + z / 2.0)
        return BchFactors(
            f1=b3 * ramp,
            f2=z,
            f3=b1 * ramp,
            f4=b1 * b3 * theta ** 2 / 2.0,
        )
    em1 = np.expm1(z)
    return BchFactors(
        f1=b3 * em1 / b2,
        f2=z,
        f3=b1 * em1 / b2,
        f4=b1 * b3 * (em1 - z) / b2 ** 2,
    )


def bch_apply_coherent(factors, alpha):
    """Action of the factorised exponential on a coherent state.

    Returns (eps, label) with the result equal to exp(eps) |label>, where
    |label> is the normalised coherent state f1 + alpha exp(f2).
    """
    f = factors
    alpha = complex(alpha)
    scaled = alpha * np.exp(f.f2)
    label = f.f1 + scaled
    eps = f.f4 + f.f3 * alpha + (
        abs(scaled) ** 2 - abs(alpha) ** 2 + abs(f.f1) ** 2
        + 2 * (f.f1 * np.conj(alpha) * np.exp(np.conj(f.f2))).real
    ) / 2.0
    return eps, label


@dataclass(frozen=True)
class BranchPair:
    """Coherent labels and phases of the two conditioned branches."""

    alpha_plus: complex
    alpha_minus: complex
    theta_plus: float
    theta_minus: float


def cdho_evolve(alpha0, g, omega, t):
    """Branch labels and phases after conditional-displacement evolution.

    Each qubit branch evolves under omega a^dag a +- g (a + a^dag); the
    labels are alpha0 e^{-i omega t} +- (g/omega)(e^{-i omega t} - 1). The
    phases are the (purely imaginary, by unitarity) exponents from the
    factorised evolution; for real alpha0 they reduce to
    (g/omega)[g t - (g/omega +- alpha0) sin(omega t)].
    """
    if omega == 0:
        raise ValueError("mode frequency must be nonzero")
    out = {}
    for sign in (+1, -1):
        factors = bch_factorize(-1j * t, sign * g, omega, sign * g)
        eps, label = bch_apply_coherent(factors, alpha0)
        out[sign] = (label, float(eps.imag))
    return BranchPair(
        alpha_plus=out[+1][0],
        alpha_minus=out[-1][0],
        theta_plus=out[+1][1],
        theta_minus=out[-1][1],
    )


@dataclass(frozen=True)
class CatRecord:
    """Two-coherent-dyad state
    rho = norm^2 [ |b+><b+| + |b-><b-|
                   + e^{-i phase} e^{delta_r + i delta_i} |b+><b-| + h.c. ].

    ``delta_r <= 0`` is the decoherence exponent of the cross dyad,
    ``delta_i`` its accumulated phase and ``drive`` the frame displacement
    label (0 for freshly prepared cats). A pure cat has delta_r = 0.
    """

    beta_plus: complex
    beta_minus: complex
    phase: float
    delta_r: float
    delta_i: float
    norm: float
    drive: complex = 0.0

    @property
    def cross_weight(self):
        """Magnitude e^{delta_r} of the coherence between the dyads."""
        return float(np.exp(self.delta_r))


def _coherent_overlap(a, b):
    """<a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)."""
    return np.exp(-abs(a) ** 2 / 2 - abs(b) ** 2 / 2 + np.conj(a) * b)


def branch_probabilities(branches):
    """Probabilities of detecting the qubit in its two charge states."""
    overlap = _coherent_overlap(branches.alpha_plus, branches.alpha_minus)
    r = (np.exp(-1j * (branches.theta_plus - branches.theta_minus))
         * overlap).real
    return (1.0 + r) / 2.0, (1.0 - r) / 2.0


def measure_cat(branches, outcome):
    """Collapse onto N (e^{i th+}|a+> + s e^{i th-}|a->) for outcome 0 (s=+1)
    or 1 (s=-1). Returns (record, probability); a zero-probability outcome
    raises DegenerateBranch instead of producing an unnormalisable state.
    """
    if outcome not in (0, 1):
        raise ValueError(f"measurement outcome must be 0 or 1, got {outcome}")
    p0, p1 = branch_probabilities(branches)
    prob = p0 if outcome == 0 else p1
    nsq_inv = 4.0 * prob  # = 2 [1 +- Re(e^{-i(th+-th-)} <a+|a->)]
    if nsq_inv <= 1e-14:
        raise DegenerateBranch(
            f"outcome {outcome} has probability {max(prob, 0.0):.3e}; "
            "collapsed state has no norm",
            probability=max(float(prob), 0.0),
        )
    return CatRecord(
        beta_plus=branches.alpha_plus,
        beta_minus=branches.alpha_minus,
        phase=0.0 if outcome == 0 else np.pi,
        delta_r=0.0,
        delta_i=branches.theta_plus - branches.theta_minus,
        norm=1.0 / np.sqrt(nsq_inv),
    ), float(prob)


def cat_from_vacuum(g, omega, t, parity=+1):
    """Even (+1) or odd (-1) cat grown from the vacuum.

    beta = g (e^{-i omega t} - 1)/omega; the branch phases coincide for a
    vacuum start, so the record carries no relative phase beyond the parity.
    """
    if parity not in (+1, -1):
        raise ValueError(f"parity must be +1 or -1, got {parity}")
    branches = cdho_evolve(0.0, g, omega, t)
    record, _prob = measure_cat(branches, 0 if parity == +1 else 1)
    return record


def dissipative_cat(beta, phase, g_s, omega, gamma, t):
    """Exact zero-temperature evolution of a driven, damped cat.

    Starting from norm (|beta> + e^{i phase} |-beta>), the state at time t
    keeps the dyad form with

        alpha(t) = (i g_s/(gamma/2 + i omega)) (e^{-gamma t/2} - e^{i omega t})
        delta_r  = 2 |beta|^2 (e^{-gamma t} - 1)
        delta_i  = 2 Im(alpha(t) conj(beta) e^{-gamma t/2})
        b+-      = (alpha(t) +- beta e^{-gamma t/2}) e^{-i omega t}

    and the normalisation fixed by the t = 0 state. Valid for a
    zero-temperature bath only.
    """
    if gamma < 0:
        raise NegativeDecay(f"decay rate {gamma} < 0")
    beta = complex(beta)
    nsq_inv = 2.0 * (1.0 + np.exp(-2 * abs(beta) ** 2) * np.cos(phase))
    if nsq_inv <= 1e-14:
        raise DegenerateBranch(
            "initial superposition has zero norm", probability=0.0)
    alpha_t = frame_alpha(g_s, gamma, omega, t)
    decay = np.exp(-gamma * t / 2)
    rot = np.exp(-1j * omega * t)
    return CatRecord(
        beta_plus=(alpha_t + beta * decay) * rot,
        beta_minus=(alpha_t - beta * decay) * rot,
        phase=float(phase),
        delta_r=2 * abs(beta) ** 2 * np.expm1(-gamma * t),
        delta_i=2 * (alpha_t * np.conj(beta) * decay).imag,
        norm=1.0 / np.sqrt(nsq_inv),
        drive=alpha_t,
    )


def realize(cat, dim):
    """Assemble the dyad expansion as a dense Fock-basis density matrix."""
    vp = coherent_state(cat.beta_plus, dim)
    vm = coherent_state(cat.beta_minus, dim)
    cross = np.exp(-1j * cat.phase + cat.delta_r + 1j * cat.delta_i)
    rho = np.outer(vp, vp.conj()) + np.outer(vm, vm.conj())
    rho = rho + cross * np.outer(vp, vm.conj())
    rho = rho + np.conj(cross) * np.outer(vm, vp.conj())
    rho *= cat.norm ** 2
    pop = top_population(rho)
    if pop > TOP_POPULATION_TOL:
        raise TruncationInsufficient(
            f"realised cat populates the top Fock levels ({pop:.3e})",
            loss=pop,
        )
    return rho


def wigner_analytic(cat, xi):
    """Closed-form Wigner function of a cat record; xi scalar or ndarray.

    W = 2 norm^2 [ e^{-2|xi - b+|^2} + e^{-2|xi - b-|^2}
                   + 2 Re e^{-i phase} e^{delta_r + i delta_i + Theta} ]
    Theta = 2 (xi conj(b-) + conj(xi) b+ - |xi|^2)
            - (|b+|^2 + |b-|^2 + 2 conj(b-) b+)/2.
    """
    xi = np.asarray(xi, complex)
    bp, bm = cat.beta_plus, cat.beta_minus
    theta = (2.0 * (xi * np.conj(bm) + np.conj(xi) * bp - np.abs(xi) ** 2)
             - 0.5 * (abs(bp) ** 2 + abs(bm) ** 2 + 2 * np.conj(bm) * bp))
    cross = np.exp(-1j * cat.phase + cat.delta_r + 1j * cat.delta_i + theta)
    w = (np.exp(-2 * np.abs(xi - bp) ** 2)
         + np.exp(-2 * np.abs(xi - bm) ** 2)
         + 2.0 * cross.real)
    w = 2.0 * cat.norm ** 2 * w
    if w.ndim == 0:
        return float(w)
    return w


def wigner_analytic_grid(cat, xs, ys):
    """Closed-form Wigner on a rectangular grid, shape (len(ys), len(xs))."""
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    return wigner_analytic(cat, xs[None, :] + 1j * ys[:, None])


def unitary_variance(k, cs, omega, t):
    """Position variance (Delta z)^2 / z0^2 under the conditional unitary.

    exp(-8 lam_k) sin^2(Omega_k t) + cos^2(Omega_k t); the whole bracket is
    the variance in units of z0^2 so t = 0 gives exactly 1 (coherent state).
    Squeezing below 1 occurs only on the branch with lam_k > 0.
    """
    spec = diagonalize_conditional(k, cs, omega)
    t = np.asarray(t, float)
    phase = spec.quasi_freq * t
    val = (np.exp(-8 * spec.lam) * np.sin(phase) ** 2 + np.cos(phase) ** 2)
    if val.ndim == 0:
        return float(val)
    return val
