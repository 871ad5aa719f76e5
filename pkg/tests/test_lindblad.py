import numpy as np
import pytest
from scipy.optimize import brentq

from cantiq._integrate import adaptive_rk
from cantiq.errors import (
    InstabilityRegime,
    InvalidCoupling,
    NegativeDecay,
    NonPhysicalMoments,
    StepSizeUnderflow,
    TruncationInsufficient,
)
from cantiq.hilbert import (
    coherent_state,
    evolve_unitary,
    expectation,
    fidelity,
    fock_state,
    ladder_ops,
    projector,
)
from cantiq.lindblad import (
    BathParams,
    MomentVector,
    critical_temperature,
    dissipator,
    evolve_master,
    evolve_master_trajectory,
    evolve_moments,
    evolve_moments_trajectory,
    frame_alpha,
    moment_matrix,
    moment_rhs,
    position_variance,
    steady_moments,
    steady_moments_numeric,
    steady_variance,
    thermal_occupancy,
    transform_check,
)
from cantiq.model import CouplingSet, conditional_hamiltonian

FIG4_CS = CouplingSet.from_couplings(quadratic=0.0115)
FIG4_BATH0 = BathParams.for_mode(0.01, 0.0, 1.0)


def dissipator_oracle(rho, gamma, nbar):
    """Literal matrix form of the thermal dissipator."""
    dim = rho.shape[0]
    a, adag, _ = ladder_ops(dim)
    down = 2 * a @ rho @ adag - adag @ a @ rho - rho @ adag @ a
    up = 2 * adag @ rho @ a - a @ adag @ rho - rho @ a @ adag
    return gamma / 2 * ((nbar + 1) * down + nbar * up)


class TestBathParams:
    def test_occupancy_at_zero_temperature(self):
        assert thermal_occupancy(1.0, 0.0) == 0.0
        assert BathParams.for_mode(0.1, 0.0, 1.0).n_thermal == 0.0

    def test_occupancy_values(self):
        # T/omega = 3: n = 1/(e^{1/3} - 1)
        assert thermal_occupancy(1.0, 3.0) == pytest.approx(
            1 / (np.exp(1 / 3) - 1), rel=1e-14)

    def test_negative_decay_rejected(self):
        with pytest.raises(NegativeDecay):
            BathParams(-0.1, 0.0, 0.0)

    def test_negative_temperature_rejected(self):
        with pytest.raises(ValueError):
            thermal_occupancy(1.0, -1.0)


class TestDissipator:
    def test_vacuum_dark_state(self):
        rho = projector(fock_state(0, 12)).astype(complex)
        bath = BathParams(1.0, 0.0, 0.0)
        assert np.abs(dissipator(rho, bath)).max() < 1e-15

    def test_single_photon_decay(self):
        dim, gamma = 8, 0.7
        rho = projector(fock_state(1, dim)).astype(complex)
        out = dissipator(rho, BathParams(gamma, 0.0, 0.0))
        expected = gamma * (projector(fock_state(0, dim))
                            - projector(fock_state(1, dim)))
        assert np.abs(out - expected).max() < 1e-14

    def test_traceless_and_matches_matrix_form(self):
        rng = np.random.default_rng(9)
        dim = 14
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = m + m.conj().T
        bath = BathParams(0.8, 0.0, 1.7)
        out = dissipator(rho, bath)
        assert abs(np.trace(out)) < 1e-12
        assert np.abs(out - dissipator_oracle(rho, 0.8, 1.7)).max() < 1e-12


class TestEvolveMaster:
    def test_unitary_limit_rotates_coherent(self):
        dim, t = 40, 1.3
        _, _, num = ladder_ops(dim)
        rho0 = projector(coherent_state(2.0, dim))
        bath = BathParams(0.0, 0.0, 0.0)
        rho_t = evolve_master(num, rho0, bath, t, tol=1e-10)
        target = projector(coherent_state(2.0 * np.exp(-1j * t), dim))
        assert fidelity(rho_t, target) >= 1 - 1e-8

    def test_trace_hermiticity_positivity(self):
        dim = 30
        a, adag, num = ladder_ops(dim)
        h = num + (-0.3) * (a + adag)
        rho0 = projector(coherent_state(1.0, dim))
        bath = BathParams.for_mode(0.05, 1.0, 1.0)
        rho_t = evolve_master(h, rho0, bath, 10.0, tol=1e-8)
        assert abs(np.trace(rho_t).real - 1.0) < 1e-9
        assert np.abs(rho_t - rho_t.conj().T).max() < 1e-10
        assert np.linalg.eigvalsh(rho_t).min() >= -1e-7

    def test_truncation_monitor_aborts(self):
        # drive strong enough to climb over a small cutoff
        dim = 20
        a, adag, num = ladder_ops(dim)
        h = num + (-3.0) * (a + adag)
        rho0 = projector(fock_state(0, dim))
        bath = BathParams(0.0, 0.0, 0.0)
        with pytest.raises(TruncationInsufficient):
            evolve_master(h, rho0, bath, 3.0)

    def test_rejects_nonhermitian_hamiltonian(self):
        dim = 6
        a, _, _ = ladder_ops(dim)
        with pytest.raises(ValueError):
            evolve_master(a, np.eye(dim, dtype=complex) / dim,
                          BathParams(0.0, 0.0, 0.0), 1.0)

    def test_trajectory_matches_single_runs(self):
        dim = 20
        a, adag, num = ladder_ops(dim)
        h = num + 0.2 * (a + adag)
        rho0 = projector(coherent_state(0.5, dim))
        bath = BathParams(0.1, 0.0, 0.0)
        traj = evolve_master_trajectory(h, rho0, bath, [0.0, 1.0, 2.5])
        single = evolve_master(h, rho0, bath, 2.5)
        assert np.abs(traj[0] - rho0).max() < 1e-14
        assert np.abs(traj[2] - single).max() < 1e-8


class TestAdaptiveRk:
    def test_underflow_on_singularity(self):
        with pytest.raises(StepSizeUnderflow):
            adaptive_rk(lambda t, y: y / (0.5 - t), np.array([1.0 + 0j]), 1.0)

    def test_exponential_accuracy(self):
        y = adaptive_rk(lambda t, y: -y, np.array([1.0 + 0j]), 3.0,
                        rtol=1e-10, atol=1e-12)
        assert abs(y[0] - np.exp(-3)) < 1e-9


class TestFrameAlpha:
    def test_initial_condition(self):
        assert frame_alpha(-300.0, 1.0, 100.0, 0.0) == 0.0

    def test_defining_ode_residual(self):
        g_s, gamma, omega = -300.0, 1.0, 100.0
        k = 1j * g_s / (gamma / 2 + 1j * omega)
        for t in (0.01, 0.3, 1.7):
            # analytic derivative of the closed form
            dal = k * (-gamma / 2 * np.exp(-gamma * t / 2)
                       - 1j * omega * np.exp(1j * omega * t))
            resid = dal + 1j * g_s * np.exp(1j * omega * t) \
                + gamma / 2 * frame_alpha(g_s, gamma, omega, t)
            assert abs(resid) < 1e-10

    def test_long_time_modulus(self):
        g_s, gamma, omega = -300.0, 1.0, 100.0
        val = frame_alpha(g_s, gamma, omega, 40.0)
        assert abs(val) == pytest.approx(
            abs(g_s) / np.sqrt(gamma ** 2 / 4 + omega ** 2), abs=1e-6)


class TestTransformCheck:
    def test_identity_without_drive(self):
        # exact identity, so the residual tracks the integrator tolerance
        dim = 24
        rho0 = projector(coherent_state(1.0, dim))
        bath = BathParams.for_mode(0.05, 0.0, 1.0)
        assert transform_check(rho0, 0.0, 1.0, bath, 5.0, tol=1e-11) < 1e-10

    def test_equivalence_zero_temperature(self):
        dim = 40
        psi = coherent_state(1.2, dim) + coherent_state(-1.2, dim)
        rho0 = projector(psi / np.linalg.norm(psi))
        bath = BathParams.for_mode(0.05, 0.0, 1.0)
        assert transform_check(rho0, -0.25, 1.0, bath, 10.0) < 1e-6

    def test_equivalence_finite_temperature(self):
        dim = 40
        rho0 = projector(coherent_state(1.0, dim))
        bath = BathParams.for_mode(0.05, 1.0, 1.0)
        assert transform_check(rho0, -0.25, 1.0, bath, 10.0) < 1e-5


class TestMomentRhs:
    def test_inhomogeneous_terms_only(self):
        d = moment_rhs(MomentVector.vacuum(), -1, FIG4_CS, 1.0, FIG4_BATH0)
        g_k = 0.0115
        assert d.m_a == 0 and d.m_adag == 0
        assert d.m_a2 == pytest.approx(-2j * g_k)
        assert d.m_adag2 == pytest.approx(2j * g_k)
        assert d.m_n == 0

    def test_thermal_pump_term(self):
        bath = BathParams.for_mode(0.01, 3.0, 1.0)
        d = moment_rhs(MomentVector.vacuum(), -1, FIG4_CS, 1.0, bath)
        assert d.m_n == pytest.approx(0.01 * bath.n_thermal)

    def test_conjugate_symmetry_preserved(self):
        rng = np.random.default_rng(2)
        bath = BathParams.for_mode(0.05, 1.0, 1.0)
        for _ in range(5):
            m_a = complex(*rng.normal(size=2))
            m_a2 = complex(*rng.normal(size=2))
            m = MomentVector(m_a, np.conj(m_a), m_a2, np.conj(m_a2),
                             rng.uniform(0, 2))
            d = moment_rhs(m, -1, FIG4_CS, 1.0, bath)
            assert d.conjugate_defect() < 1e-14

    def test_free_oscillation_matches_dense_unitary(self):
        # gamma = 0: <n>(t) from the moment ODE vs dense unitary evolution
        dim = 60
        bath = BathParams(0.0, 0.0, 0.0)
        h = conditional_hamiltonian(-1, FIG4_CS, 1.0, dim)
        _, _, num = ladder_ops(dim)
        psi0 = fock_state(0, dim)
        for t in (1.0, 5.0, 11.0):
            m = evolve_moments(MomentVector.vacuum(), -1, FIG4_CS, 1.0, bath,
                               t, tol=1e-10)
            psi = evolve_unitary(h, psi0, t)
            dense_n = expectation(num, psi).real
            assert abs(m.m_n.real - dense_n) < 1e-8


class TestEvolveMoments:
    def test_uncoupled_vacuum_stays_vacuum(self):
        cs = CouplingSet.from_couplings(quadratic=0.0)
        bath = BathParams(0.01, 0.0, 0.0)
        m = evolve_moments(MomentVector.vacuum(), -1, cs, 1.0, bath, 30.0)
        assert max(abs(m.to_array())) < 1e-12

    def test_adaptive_matches_exact_path(self):
        bath = BathParams.for_mode(0.01, 1.0, 1.0)
        m0 = MomentVector.vacuum()
        for t in (3.0, 17.0):
            m_rk = evolve_moments(m0, -1, FIG4_CS, 1.0, bath, t, tol=1e-10)
            m_ex = evolve_moments(m0, -1, FIG4_CS, 1.0, bath, t,
                                  method="exact")
            assert np.abs(m_rk.to_array() - m_ex.to_array()).max() < 1e-8

    def test_variance_matches_dense_master_equation(self):
        # Fig 4 parameters, omega t = 20, dim 60
        dim, t = 60, 20.0
        h = conditional_hamiltonian(-1, FIG4_CS, 1.0, dim)
        rho0 = projector(fock_state(0, dim))
        rho_t = evolve_master(h, rho0, FIG4_BATH0, t, tol=1e-8)
        a, adag, _ = ladder_ops(dim)
        x = a + adag
        dense_var = (expectation(x @ x, rho_t).real
                     - expectation(x, rho_t).real ** 2)
        m = evolve_moments(MomentVector.vacuum(), -1, FIG4_CS, 1.0,
                           FIG4_BATH0, t, tol=1e-8)
        assert abs(position_variance(m) - dense_var) < 1e-6

    def test_long_time_convergence_to_steady(self):
        # transient remnants scale like e^{-gamma t}; gamma t = 15 here
        m = evolve_moments(MomentVector.vacuum(), -1, FIG4_CS, 1.0,
                           FIG4_BATH0, 1500.0, tol=1e-10)
        target = steady_moments(-1, FIG4_CS, 1.0, FIG4_BATH0)
        assert np.abs(m.to_array() - target.to_array()).max() < 1e-6

    def test_trajectory_monotone_times(self):
        bath = BathParams(0.01, 0.0, 0.0)
        traj = evolve_moments_trajectory(
            MomentVector.vacuum(), -1, FIG4_CS, 1.0, bath, [0.0, 1.0, 2.0])
        assert len(traj) == 3
        with pytest.raises(ValueError):
            evolve_moments_trajectory(
                MomentVector.vacuum(), -1, FIG4_CS, 1.0, bath, [2.0, 1.0])


class TestPositionVariance:
    def test_vacuum(self):
        assert position_variance(MomentVector.vacuum()) == 1.0

    def test_thermal(self):
        assert position_variance(MomentVector.thermal(2.5)) == pytest.approx(
            6.0)

    def test_coherent(self):
        m = MomentVector.coherent(1.3 - 0.4j)
        assert position_variance(m) == pytest.approx(1.0, abs=1e-12)

    def test_nonphysical_rejected(self):
        bad = MomentVector(0.0, 0.0, -5.0, -5.0, 0.0)
        with pytest.raises(NonPhysicalMoments):
            position_variance(bad)


class TestSteadyState:
    def test_uncoupled_is_thermal(self):
        cs = CouplingSet.from_couplings(quadratic=0.0)
        bath = BathParams.for_mode(0.01, 1.0, 1.0)
        m = steady_moments(-1, cs, 1.0, bath)
        assert m.m_a == 0 and m.m_a2 == 0
        assert m.m_n == pytest.approx(bath.n_thermal)
        assert steady_variance(-1, cs, 1.0, bath) == pytest.approx(
            2 * bath.n_thermal + 1)

    def test_fig4_occupancy(self):
        # 8 g'^2 / (gamma^2 + 4 omega_k^2 - 16 g'^2) at T = 0
        g, om_k = 0.0115, 1.023
        denom = 0.01 ** 2 + 4 * om_k ** 2 - 16 * g ** 2
        m = steady_moments(-1, FIG4_CS, 1.0, FIG4_BATH0)
        assert m.m_n.real == pytest.approx(8 * g ** 2 / denom, rel=1e-12)
        assert m.m_n.real == pytest.approx(2.53e-4, abs=1e-6)

    def test_closed_form_vs_linear_solve(self):
        for temp in (0.0, 1.0, 3.0):
            bath = BathParams.for_mode(0.01, temp, 1.0)
            closed = steady_moments(-1, FIG4_CS, 1.0, bath).to_array()
            solved = steady_moments_numeric(-1, FIG4_CS, 1.0, bath).to_array()
            assert np.abs(closed - solved).max() < 1e-12

    def test_rhs_vanishes_at_steady_state(self):
        bath = BathParams.for_mode(0.01, 1.0, 1.0)
        m = steady_moments(-1, FIG4_CS, 1.0, bath)
        d = moment_rhs(m, -1, FIG4_CS, 1.0, bath)
        assert np.abs(d.to_array()).max() < 1e-14

    def test_steady_variance_zero_temperature(self):
        g, om_k = 0.0115, 1.023
        expected = (0.01 ** 2 + 4 * om_k * (om_k - 2 * g)) / (
            0.01 ** 2 + 4 * om_k ** 2 - 16 * g ** 2)
        val = steady_variance(-1, FIG4_CS, 1.0, FIG4_BATH0)
        assert val == pytest.approx(expected, rel=1e-14)
        assert val == pytest.approx(0.97802, abs=1e-4)

    def test_variance_is_one_at_critical_temperature(self):
        t_c = critical_temperature(0.01, 1.0, 0.0115)
        bath = BathParams.for_mode(0.01, t_c, 1.0)
        assert steady_variance(-1, FIG4_CS, 1.0, bath) == pytest.approx(
            1.0, abs=1e-9)

    def test_antisqueezing_branch_never_below_one(self):
        for temp in np.linspace(0.0, 2.0, 21):
            bath = BathParams.for_mode(0.01, temp, 1.0)
            assert steady_variance(+1, FIG4_CS, 1.0, bath) >= 1.0 - 1e-12

    def test_bisection_recovers_critical_temperature(self):
        t_c = critical_temperature(0.01, 1.0, 0.0115)

        def crossing(temp):
            bath = BathParams.for_mode(0.01, temp, 1.0)
            return steady_variance(-1, FIG4_CS, 1.0, bath) - 1.0

        root = brentq(crossing, 0.05, 0.5, xtol=1e-12)
        assert abs(root - t_c) < 1e-6

    def test_instability_raises(self):
        cs = CouplingSet.from_couplings(quadratic=0.25)
        bath = BathParams(0.0, 0.0, 0.0)
        with pytest.raises(InstabilityRegime):
            steady_variance(+1, cs, 1.0, bath)
        with pytest.raises(InstabilityRegime):
            steady_moments(+1, cs, 1.0, bath)


class TestCriticalTemperature:
    def test_reference_value(self):
        assert critical_temperature(0.01, 1.0, 0.0115) == pytest.approx(
            0.222, abs=1e-3)

    def test_undamped_closed_form(self):
        # gamma = 0: 1/ln(omega/g' + 3)
        val = critical_temperature(0.0, 1.0, 0.0115)
        assert val == pytest.approx(1 / np.log(1 / 0.0115 + 3), rel=1e-14)
        assert val == pytest.approx(0.22226, abs=1e-4)

    def test_monotone_in_coupling(self):
        vals = [critical_temperature(0.01, 1.0, g)
                for g in np.linspace(0.005, 0.1, 12)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_invalid_coupling(self):
        with pytest.raises(InvalidCoupling):
            critical_temperature(0.01, 1.0, 0.0)
