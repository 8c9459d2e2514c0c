import numpy as np
import pytest

from lieopt.integrators import (
    INTEGRATOR_KINDS,
    OptimizerState,
    _drift,
    energy,
    gd_step,
    integrator_step,
    nag_order4_step,
    nag_strang_step,
)
from lieopt.linalg import cayley, pade22_exp
from lieopt.problems import force, full_spectrum, initial_state, leading_ev, objective
from lieopt.schedules import ConstantGamma, Corrected, NagC, damp_factor, kick_weight

from conftest import random_symmetric

SC = ConstantGamma(1.0)


def advance(state, problem, schedule, h, kind, steps):
    for _ in range(steps):
        state = integrator_step(state, problem, schedule, h, kind)
    return state


class TestGdStep:
    def test_stationary_at_commuting_diagonal(self):
        problem = leading_ev(np.diag([3.0, 1.0]), 1)
        state = initial_state(problem)
        out = gd_step(state, problem, 0.05)
        assert np.array_equal(out.point, np.eye(2))
        assert out.step_index == 1

    def test_hand_2x2_step(self):
        problem = leading_ev(np.array([[1.0, 2.0], [2.0, 3.0]]), 1)
        state = initial_state(problem)
        f = force(problem, state.point)
        assert np.array_equal(f, [[0.0, -2.0], [2.0, 0.0]])
        out = gd_step(state, problem, 0.01)
        assert np.allclose(out.point, cayley(f, 0.01), atol=1e-15)

    def test_objective_monotone_50_steps(self, rng):
        problem = leading_ev(random_symmetric(rng, 5), 1)
        state = initial_state(problem)
        h = 0.02
        prev = objective(problem, state.point)
        for _ in range(50):
            state = gd_step(state, problem, h)
            now = objective(problem, state.point)
            assert now <= prev + 1e-12
            prev = now

    def test_full_spectrum_descends_and_sorts(self, rng):
        problem = full_spectrum(random_symmetric(rng, 5))
        state = initial_state(problem)
        prev = objective(problem, state.point)
        for _ in range(300):
            state = gd_step(state, problem, 0.05)
            now = objective(problem, state.point)
            assert now <= prev + 1e-10
            prev = now
        # long-run diagonal of R^T A R approaches the descending spectrum
        m = state.point.T @ problem.matrix @ state.point
        values = np.sort(np.linalg.eigvalsh(problem.matrix))[::-1]
        assert np.allclose(np.diag(m), values, atol=2e-2)


class TestStrangStep:
    def test_equilibrium_only_advances_clock(self):
        problem = leading_ev(np.diag([3.0, 1.0, 0.5]), 2)
        state = initial_state(problem)
        out = nag_strang_step(state, problem, SC, 0.1)
        assert np.array_equal(out.point, state.point)
        assert np.array_equal(out.velocity, state.velocity)
        assert out.step_index == 1 and out.time == 0.1

    def test_zero_force_hand_composition(self):
        problem = leading_ev(np.zeros((2, 2)), 1)
        xi0 = np.array([[0.0, 1.0], [-1.0, 0.0]])
        state = OptimizerState(np.eye(2), xi0, 0, 0.0)
        out = nag_strang_step(state, problem, SC, 0.1)
        # the step multiplies by exp(-0.05) twice; equal to exp(-0.1) up to one ulp
        assert np.allclose(out.velocity, np.exp(-0.1) * xi0, rtol=1e-15)
        assert np.allclose(out.point, cayley(np.exp(-0.05) * xi0, 0.1), atol=1e-15)

    def test_substeps_match_manual_ladder_bitwise(self, rng):
        problem = leading_ev(random_symmetric(rng, 6), 2)
        state = initial_state(problem)
        state = nag_strang_step(state, problem, SC, 0.05)  # nontrivial point
        h, i = 0.05, state.step_index
        out = nag_strang_step(state, problem, SC, h)

        vel = state.velocity + (0.5 * h) * force(problem, state.point)
        vel = vel * damp_factor(SC, i * h, (i + 0.5) * h)
        point = state.point @ cayley(vel, h)
        vel = vel * damp_factor(SC, (i + 0.5) * h, (i + 1) * h)
        vel = vel + (0.5 * h) * force(problem, point)
        assert np.array_equal(out.velocity, vel)

    def test_damp_log_reports_exact_factors(self, rng):
        problem = leading_ev(random_symmetric(rng, 5), 1)
        state = initial_state(problem)
        for schedule in (SC, NagC(), Corrected(NagC(), 0.01)):
            log = []
            nag_strang_step(state, problem, schedule, 0.2, damp_log=log)
            assert len(log) == 2
            (a0, b0, f0), (a1, b1, f1) = log
            assert (a0, b0, a1, b1) == (0.0, 0.1, 0.1, 0.2)
            assert f0 == damp_factor(schedule, 0.0, 0.1)
            assert f1 == damp_factor(schedule, 0.1, 0.2)

    def test_nag_c_first_damp_annihilates_momentum(self):
        # the 3/t schedule gives a zero factor on the first half-interval,
        # wiping any initial momentum at step zero
        problem = leading_ev(np.zeros((2, 2)), 1)
        xi0 = np.array([[0.0, 2.0], [-2.0, 0.0]])
        state = OptimizerState(np.eye(2), xi0, 0, 0.0)
        out = nag_strang_step(state, problem, NagC(), 0.1)
        assert np.array_equal(out.velocity, np.zeros((2, 2)))
        assert np.array_equal(out.point, np.eye(2))

    def test_second_order_convergence(self, rng):
        problem = leading_ev(random_symmetric(rng, 4), 2)
        errs = []
        for h in (0.2, 0.1):
            steps = round(2.0 / h)
            ref = advance(initial_state(problem), problem, SC, h / 64, "strang", steps * 64)
            sol = advance(initial_state(problem), problem, SC, h, "strang", steps)
            errs.append(np.linalg.norm(sol.point - ref.point)
                        + np.linalg.norm(sol.velocity - ref.velocity))
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)


class TestOrder4Step:
    def test_coefficient_sums(self):
        from lieopt.integrators import _STAGES_4A, _STAGES_4B

        for stages in (_STAGES_4A, _STAGES_4B):
            kicks = sum(c for kind, c in stages if kind == "kick")
            drifts = sum(c for kind, c in stages if kind == "drift")
            assert abs(kicks - 1.0) <= 1e-12
            assert abs(drifts - 1.0) <= 1e-12
        assert len(_STAGES_4A) == 13
        assert len(_STAGES_4B) == 7

    def test_equilibrium(self):
        problem = leading_ev(np.diag([2.0, 1.0]), 1)
        state = initial_state(problem)
        for version in ("4a", "4b"):
            out = nag_order4_step(state, problem, SC, 0.1, version=version)
            assert np.array_equal(out.point, state.point)
            assert np.array_equal(out.velocity, state.velocity)

    @pytest.mark.parametrize("version", ["4a", "4b"])
    def test_fourth_order_convergence(self, rng, version):
        problem = leading_ev(random_symmetric(rng, 4), 2)
        errs = []
        for h in (0.4, 0.2):
            steps = round(2.0 / h)
            ref = advance(initial_state(problem), problem, SC, h / 64, version, steps * 64)
            sol = advance(initial_state(problem), problem, SC, h, version, steps)
            errs.append(np.linalg.norm(sol.point - ref.point)
                        + np.linalg.norm(sol.velocity - ref.velocity))
        assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.3)

    def test_rejects_unknown_version(self, rng):
        problem = leading_ev(random_symmetric(rng, 3), 1)
        with pytest.raises(ValueError):
            nag_order4_step(initial_state(problem), problem, SC, 0.1, version="5")


class TestPreservation:
    @pytest.mark.parametrize("kind", INTEGRATOR_KINDS)
    def test_group_and_skew_preserved(self, rng, kind):
        n = 12
        problem = leading_ev(random_symmetric(rng, n), 2)
        state = initial_state(problem)
        schedule = SC
        for _ in range(400):
            state = integrator_step(state, problem, schedule, 0.05, kind)
        assert state.group_drift() <= 100 * n * np.finfo(float).eps * 400
        assert state.skew_drift() == 0.0
        assert np.array_equal(state.velocity, -state.velocity.T)

    def test_energy_dissipates_along_momentum_flow(self, rng):
        problem = leading_ev(random_symmetric(rng, 5), 2)
        state = initial_state(problem)
        h = 1e-3
        prev = energy(state, problem)
        for _ in range(500):
            state = nag_strang_step(state, problem, SC, h)
            now = energy(state, problem)
            assert now <= prev + 1e-9
            prev = now


class TestLowRankDrift:
    def test_matches_dense_route(self, rng):
        n, l = 24, 3
        z = rng.standard_normal((n - l, l))
        xi = np.zeros((n, n))
        xi[l:, :l] = z
        xi[:l, l:] = -z.T
        point, _ = np.linalg.qr(rng.standard_normal((n, n)))
        for tau in (0.05, 0.4, -0.3):
            assert np.allclose(_drift(point, xi, tau, l, False), point @ cayley(xi, tau),
                               atol=1e-13)
            assert np.allclose(_drift(point, xi, tau, l, True), point @ pade22_exp(xi, tau),
                               atol=1e-13)

    def test_falls_back_on_full_velocity(self, rng):
        n = 10
        m = rng.standard_normal((n, n))
        xi = (m - m.T) / 2  # populated diagonal blocks: not bordered
        point = np.eye(n)
        assert np.array_equal(_drift(point, xi, 0.1, 2, False), point @ cayley(xi, 0.1))


class TestEnergy:
    def test_potential_only(self):
        problem = leading_ev(np.diag([3.0, 1.0]), 1)
        assert energy(initial_state(problem), problem) == -3.0

    def test_kinetic_only(self):
        problem = leading_ev(np.zeros((2, 2)), 1)
        xi = np.array([[0.0, 1.0], [-1.0, 0.0]])
        state = OptimizerState(np.eye(2), xi, 0, 0.0)
        assert energy(state, problem) == 1.0

    def test_dissipation_identity_finite_difference(self, rng):
        # dE/dt = -gamma * tr(xi^T xi) checked with centered differences,
        # kinetic term averaged over the step endpoints
        problem = leading_ev(random_symmetric(rng, 5), 2)
        h = 1e-3
        state = initial_state(problem)
        worst = 0.0
        for _ in range(400):
            nxt = nag_strang_step(state, problem, SC, h)
            de = (energy(nxt, problem) - energy(state, problem)) / h
            kin = 0.5 * (np.sum(state.velocity**2) + np.sum(nxt.velocity**2))
            worst = max(worst, abs(de + SC.gamma * kin))
            state = nxt
        assert worst <= 10 * h


def test_integrator_step_requires_schedule(rng):
    problem = leading_ev(random_symmetric(rng, 3), 1)
    with pytest.raises(ValueError):
        integrator_step(initial_state(problem), problem, None, 0.1, "strang")
    with pytest.raises(ValueError):
        integrator_step(initial_state(problem), problem, SC, 0.1, "euler")
