import numpy as np
import pytest

from lieopt.exceptions import DimensionMismatch, EmptyBatch
from lieopt.integrators import integrator_step
from lieopt.problems import initial_state, leading_ev
from lieopt.schedules import ConstantGamma
from lieopt.stochastic import (
    MemberSampler,
    make_synthetic_batch,
    matrix_batch,
    sample_member,
    stochastic_step,
)

from conftest import random_symmetric

SC = ConstantGamma(1.0)


class TestSampler:
    def test_single_member_always_chosen(self):
        batch = matrix_batch(np.zeros((1, 3, 3)))
        sampler = MemberSampler(seed=0)
        assert all(sample_member(batch, sampler)[0] == 0 for _ in range(20))

    def test_same_seed_same_sequence(self):
        batch = matrix_batch(np.zeros((7, 2, 2)))
        a = MemberSampler(seed=99)
        b = MemberSampler(seed=99)
        seq_a = [sample_member(batch, a)[0] for _ in range(200)]
        seq_b = [sample_member(batch, b)[0] for _ in range(200)]
        assert seq_a == seq_b

    def test_streams_differ(self):
        batch = matrix_batch(np.zeros((7, 2, 2)))
        a = MemberSampler(seed=99, stream=0)
        b = MemberSampler(seed=99, stream=1)
        assert [a.draw(7) for _ in range(50)] != [b.draw(7) for _ in range(50)]

    def test_uniformity_within_binomial_bounds(self):
        k, draws = 100, 100_000
        batch = matrix_batch(np.zeros((k, 1, 1)))
        sampler = MemberSampler(seed=5)
        counts = np.zeros(k, dtype=int)
        for _ in range(draws):
            counts[sample_member(batch, sampler)[0]] += 1
        expected = draws / k
        sigma = np.sqrt(draws * (1 / k) * (1 - 1 / k))
        assert np.all(np.abs(counts - expected) <= 5 * sigma)

    def test_empty_batch_rejected(self):
        with pytest.raises(EmptyBatch):
            matrix_batch(np.zeros((0, 2, 2)))


class TestSyntheticBatch:
    def test_zero_scale_copies_input(self, rng):
        a = random_symmetric(rng, 5)
        batch = make_synthetic_batch(a, 4, sigma_scale=0.0, seed=3)
        assert all(np.array_equal(member, a) for member in batch.members)
        assert np.array_equal(batch.mean, a)

    def test_members_bitwise_symmetric(self, rng):
        a = random_symmetric(rng, 6)
        batch = make_synthetic_batch(a, 8, seed=11)
        for member in batch.members:
            assert np.array_equal(member, member.T)
        assert np.array_equal(batch.mean, batch.mean.T)

    def test_mean_matches_members(self, rng):
        a = random_symmetric(rng, 6)
        batch = make_synthetic_batch(a, 10, seed=2)
        rel = np.linalg.norm(batch.mean - batch.members.mean(axis=0)) / np.linalg.norm(batch.mean)
        assert rel <= 1e-12

    def test_mean_concentrates(self, rng):
        a = random_symmetric(rng, 100) / 10
        batch = make_synthetic_batch(a, 100, seed=4)
        single = np.linalg.norm(batch.members[0] - a)
        assert np.linalg.norm(batch.mean - a) < single / 5

    def test_reproducible(self, rng):
        a = random_symmetric(rng, 4)
        b1 = make_synthetic_batch(a, 5, seed=42)
        b2 = make_synthetic_batch(a, 5, seed=42)
        assert np.array_equal(b1.members, b2.members)


class TestStochasticStep:
    def test_degenerate_batch_matches_deterministic_bitwise(self, rng):
        a = random_symmetric(rng, 8)
        problem = leading_ev(a, 2)
        batch = matrix_batch(np.repeat(a[None, :, :], 5, axis=0))
        sampler = MemberSampler(seed=0)
        s_det = initial_state(problem)
        s_sto = initial_state(problem)
        for _ in range(25):
            s_det = integrator_step(s_det, problem, SC, 0.05, "strang")
            s_sto = stochastic_step(s_sto, problem, batch, sampler, SC, 0.05, "strang")
        assert np.array_equal(s_det.point, s_sto.point)
        assert np.array_equal(s_det.velocity, s_sto.velocity)

    def test_noisy_forces_keep_group_and_skew(self, rng):
        a = np.diag([3.0, 1.0])
        eps = 0.3
        members = np.stack([
            a + np.array([[0.0, eps], [eps, 0.0]]),
            a - np.array([[0.0, eps], [eps, 0.0]]),
        ])
        batch = matrix_batch(members)
        problem = leading_ev(a, 1)
        sampler = MemberSampler(seed=8)
        state = initial_state(problem)
        for _ in range(500):
            state = stochastic_step(state, problem, batch, sampler, SC, 0.05, "strang")
        assert state.group_drift() <= 1e-12
        assert state.skew_drift() == 0.0

    def test_one_draw_per_step(self, rng):
        a = random_symmetric(rng, 4)
        problem = leading_ev(a, 1)
        batch = make_synthetic_batch(a, 6, seed=1)
        sampler = MemberSampler(seed=2)
        for kind in ("gd", "strang", "4a", "4b"):
            before = sampler.draws
            stochastic_step(initial_state(problem), problem, batch, sampler, SC, 0.05, kind)
            assert sampler.draws == before + 1

    def test_one_member_serves_both_kicks(self, rng):
        # replaying the drawn member through the deterministic step must
        # reproduce the stochastic step exactly
        a = random_symmetric(rng, 5)
        problem = leading_ev(a, 2)
        batch = make_synthetic_batch(a, 4, seed=9)
        sampler = MemberSampler(seed=31)
        state = initial_state(problem)
        shadow = MemberSampler(seed=31)
        for _ in range(10):
            idx = shadow.draw(4)
            expected = integrator_step(
                state, leading_ev(batch.members[idx], 2), SC, 0.05, "strang"
            )
            state = stochastic_step(state, problem, batch, sampler, SC, 0.05, "strang")
            assert np.array_equal(state.point, expected.point)
            assert np.array_equal(state.velocity, expected.velocity)

    def test_dimension_check(self, rng):
        problem = leading_ev(random_symmetric(rng, 4), 1)
        batch = make_synthetic_batch(random_symmetric(rng, 5), 3, seed=0)
        with pytest.raises(DimensionMismatch):
            stochastic_step(initial_state(problem), problem, batch,
                            MemberSampler(seed=0), SC, 0.05, "strang")

    def test_trajectory_reproducible(self, rng):
        a = random_symmetric(rng, 6)
        problem = leading_ev(a, 2)
        batch = make_synthetic_batch(a, 5, seed=3)

        def run():
            sampler = MemberSampler(seed=77)
            s = initial_state(problem)
            for _ in range(30):
                s = stochastic_step(s, problem, batch, sampler, SC, 0.05, "strang")
            return s

        s1, s2 = run(), run()
        assert np.array_equal(s1.point, s2.point)
        assert np.array_equal(s1.velocity, s2.velocity)
