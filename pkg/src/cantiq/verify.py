"""Cross-check suite: every closed-form result is re-derived through an
independent numerical route and the discrepancy is reported.

Checks return :class:`CheckResult` records; :func:`run_verification` runs
them all in order. Numerical failures (for example a cutoff too small for
the requested states) propagate as exceptions rather than failed checks.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .closedform import (
    bch_apply_coherent,
    bch_factorize,
    dissipative_cat,
    realize,
    wigner_analytic_grid,
)
from .errors import TruncationInsufficient
from .hilbert import (
    coherent_state,
    expectation,
    fidelity,
    ladder_ops,
    projector,
    trace_distance,
    wigner_grid,
)
from .lindblad import (
    BathParams,
    MomentVector,
    apply_frame,
    evolve_master,
    evolve_master_trajectory,
    evolve_moments,
    frame_at,
    position_variance,
    steady_moments,
    steady_moments_numeric,
    transform_check,
)
from .model import CouplingSet, conditional_hamiltonian

# Cat-decoherence scenario of the phase-space figures: strong drive, fast
# mode (omega/gamma = 100, g_s/gamma = -300, beta = 3).
CAT_SCENARIO = dict(omega=100.0, gamma=1.0, g_s=-300.0, beta=3.0, phase=0.0)
CAT_TIMES = (0.0, 0.06, 0.5, 0.1, 1.5, 20.0)

# Moderate-drive scenario where the driven orbit stays well inside the
# cutoff, so the master equation can be integrated directly.
DIRECT_SCENARIO = dict(omega=1.0, gamma=0.05, g_s=-0.25, beta=1.2)

SQUEEZE_CS = CouplingSet.from_couplings(quadratic=0.0115)


@dataclass(frozen=True)
class VerifyProfile:
    dim: int = 60
    tol: float = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str


def _result(name, value, threshold, detail):
    return CheckResult(name=name, passed=bool(value < threshold),
                       value=float(value), threshold=threshold, detail=detail)


def realize_auto(cat, base_dim):
    """Realize a cat record, growing the cutoff when the labels outgrow it.

    Far phase-space points of the displaced-parity trace are sensitive to
    block-to-tail coherences, so once the labels no longer fit the base
    cutoff the replacement uses the wider m^2 + 12 m + 20 rule rather than
    the plain state-fitting one.
    """
    m = max(abs(cat.beta_plus), abs(cat.beta_minus))
    if m ** 2 + 6 * m + 10 <= base_dim:
        dim = base_dim
    else:
        dim = int(np.ceil(m ** 2 + 12 * m + 20))
    for _ in range(6):
        try:
            return realize(cat, dim), dim
        except TruncationInsufficient:
            dim = int(dim * 1.25) + 2
    raise TruncationInsufficient(
        f"cat with labels up to {m:.3g} did not fit by dim={dim}")


def wigner_discrepancy(cat, dim, xs, ys):
    """Max abs difference between the analytic Wigner form of a record and
    the displaced-parity trace of its realised density matrix."""
    rho, dim_used = realize_auto(cat, dim)
    analytic = wigner_analytic_grid(cat, xs, ys)
    numeric = wigner_grid(rho, xs, ys)
    return float(np.abs(analytic - numeric).max()), dim_used


def check_bch_vs_dense(profile, draws=20, seed=2024):
    """Factorisation identity against dense matrix exponentials.

    Compared on the low half of a dim-40 space (the normal-ordered product
    is block-exact there) plus the action on a coherent state.
    """
    dim, half = 40, 20
    a, adag, num = ladder_ops(dim)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        theta = complex(*rng.uniform(-0.8, 0.8, 2))
        b1, b2, b3 = (complex(*rng.uniform(-0.8, 0.8, 2)) for _ in range(3))
        fac = bch_factorize(theta, b1, b2, b3)
        gen = theta * (b1 * a + b2 * num + b3 * adag)
        product = (np.exp(fac.f4) * expm(fac.f1 * adag)
                   @ np.diag(np.exp(fac.f2 * np.arange(dim)))
                   @ expm(fac.f3 * a))
        worst = max(worst,
                    np.abs(expm(gen) - product)[:half, :half].max())
        eps, label = bch_apply_coherent(fac, 0.6)
        dense_state = expm(gen) @ coherent_state(0.6, dim)
        closed_state = np.exp(eps) * coherent_state(label, dim)
        worst = max(worst, np.abs(dense_state - closed_state).max())
    return _result(
        "bch-vs-dense-exponential", worst, 1e-9,
        f"{draws} seeded draws, dim {dim}, low {half}x{half} block")


def check_cat_vs_master_equation(profile):
    """Closed-form dissipative cat against dense integration.

    The drive makes the undamped branch orbit out to |label| ~ 9, far
    beyond any workable cutoff, so the dense route integrates the
    frame-standard form (pure thermal decay) and maps back through the
    exact rotation + displacement frame; the frame itself is validated
    independently by the frame-equivalence check.
    """
    p = CAT_SCENARIO
    times = (0.06, 0.5, 1.5)
    bath = BathParams.for_mode(p["gamma"], 0.0, p["omega"])
    cat0 = dissipative_cat(p["beta"], p["phase"], p["g_s"], p["omega"],
                           p["gamma"], 0.0)
    rho0 = realize(cat0, profile.dim)
    zero_h = np.zeros((profile.dim, profile.dim))
    decayed = evolve_master_trajectory(zero_h, rho0, bath, times,
                                       tol=profile.tol)
    worst = 0.0
    for t, rho_frame in zip(times, decayed):
        frame = frame_at(p["g_s"], p["gamma"], p["omega"], t)
        dense = apply_frame(rho_frame, frame)
        closed = realize(
            dissipative_cat(p["beta"], p["phase"], p["g_s"], p["omega"],
                            p["gamma"], t), profile.dim)
        worst = max(worst, 1.0 - fidelity(closed, dense))
    return _result(
        "cat-vs-master-equation", worst, 1e-3,
        f"frame-assisted dense oracle, gamma t in {times}, dim {profile.dim}")


def check_cat_vs_direct_integration(profile):
    """Same comparison with a moderate drive, integrating the driven master
    equation directly (no frame assistance)."""
    p = DIRECT_SCENARIO
    dim = min(profile.dim, 40)
    t = 10.0  # gamma t = 0.5
    a, adag, num = ladder_ops(dim)
    h = p["omega"] * num + p["g_s"] * (a + adag)
    bath = BathParams.for_mode(p["gamma"], 0.0, p["omega"])
    rho0 = realize(dissipative_cat(p["beta"], 0.0, p["g_s"], p["omega"],
                                   p["gamma"], 0.0), dim)
    dense = evolve_master(h, rho0, bath, t, tol=profile.tol)
    closed = realize(dissipative_cat(p["beta"], 0.0, p["g_s"], p["omega"],
                                     p["gamma"], t), dim)
    return _result(
        "cat-vs-direct-integration", 1.0 - fidelity(closed, dense), 1e-5,
        f"driven master equation integrated directly, gamma t = 0.5, dim {dim}")


def check_frame_equivalence(profile):
    """Direct vs frame-transformed integration over a temperature/time grid."""
    p = DIRECT_SCENARIO
    worst = 0.0
    cat0 = dissipative_cat(p["beta"], 0.0, p["g_s"], p["omega"], p["gamma"],
                           0.0)
    rho0 = realize(cat0, profile.dim)
    for temp in (0.0, 1.0):
        bath = BathParams.for_mode(p["gamma"], temp, p["omega"])
        for gt in (0.1, 0.5, 1.5):
            t = gt / p["gamma"]
            worst = max(worst, transform_check(rho0, p["g_s"], p["omega"],
                                               bath, t, tol=profile.tol))
    return _result(
        "frame-equivalence", worst, 1e-5,
        f"T/omega in (0, 1) x gamma t in (0.1, 0.5, 1.5), dim {profile.dim}")


def check_moments_vs_dense(profile):
    """Moment-ODE position variance against the dense master equation."""
    bath = BathParams.for_mode(0.01, 0.0, 1.0)
    t = 20.0
    h = conditional_hamiltonian(-1, SQUEEZE_CS, 1.0, profile.dim)
    rho0 = projector(coherent_state(0.0, profile.dim))
    rho_t = evolve_master(h, rho0, bath, t, tol=profile.tol)
    a, adag, _ = ladder_ops(profile.dim)
    x = a + adag
    dense_var = (expectation(x @ x, rho_t).real
                 - expectation(x, rho_t).real ** 2)
    m = evolve_moments(MomentVector.vacuum(), -1, SQUEEZE_CS, 1.0, bath, t,
                       tol=profile.tol)
    return _result(
        "moments-vs-dense", abs(position_variance(m) - dense_var), 1e-6,
        f"vacuum under the squeezing branch to omega t = 20, dim {profile.dim}")


def check_steady_closed_vs_solve(profile):
    """Printed steady-state moments against the 5x5 linear solve."""
    worst = 0.0
    for temp in (0.0, 1.0, 3.0):
        bath = BathParams.for_mode(0.01, temp, 1.0)
        for k in (-1, +1):
            closed = steady_moments(k, SQUEEZE_CS, 1.0, bath).to_array()
            solved = steady_moments_numeric(k, SQUEEZE_CS, 1.0,
                                            bath).to_array()
            worst = max(worst, np.abs(closed - solved).max())
    return _result(
        "steady-closed-vs-solve", worst, 1e-12,
        "both branches, T/omega in (0, 1, 3)")


def check_wigner_consistency(profile, step=0.25):
    """Analytic Wigner form against the displaced-parity trace on a grid.

    The cutoff grows automatically at times where the undamped branch
    swings beyond the base dim (it reaches |label| ~ 8.4 at gamma t = 0.1).
    """
    p = CAT_SCENARIO
    xs = np.arange(-5.0, 5.0 + 1e-9, step)
    worst = 0.0
    dims = []
    for gt in CAT_TIMES:
        cat = dissipative_cat(p["beta"], p["phase"], p["g_s"], p["omega"],
                              p["gamma"], gt)
        diff, dim_used = wigner_discrepancy(cat, profile.dim, xs, xs)
        dims.append(dim_used)
        worst = max(worst, diff)
    return _result(
        "wigner-analytic-vs-numeric", worst, 1e-6,
        f"grid [-5,5]^2 step {step}, gamma t {CAT_TIMES}, dims {dims}")


ALL_CHECKS = (
    check_bch_vs_dense,
    check_cat_vs_master_equation,
    check_cat_vs_direct_integration,
    check_frame_equivalence,
    check_moments_vs_dense,
    check_steady_closed_vs_solve,
    check_wigner_consistency,
)


def run_verification(profile=None):
    """Run every cross-check; returns the list of results in order."""
    profile = profile or VerifyProfile()
    return [check(profile) for check in ALL_CHECKS]
