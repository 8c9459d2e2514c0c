"""Stochastic-gradient mode.

A run owns an immutable batch of K symmetric matrices and a counter-based
sampler.  Each step draws one member uniformly and evaluates every force of
that step with it (both half-kicks of a Strang step, all kick blocks of a
fourth-order step).  The batch mean is stored once, solely so oracles can
score against the true target.  Only the objective matrix is ever stochastic;
the constraint enters through the initial condition alone, so there is
nothing stochastic it could be replaced with.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .exceptions import DimensionMismatch, EmptyBatch
from .integrators import IntegratorKind, OptimizerState, integrator_step
from .problems import Problem
from .schedules import Schedule

__all__ = [
    "MatrixBatch",
    "matrix_batch",
    "make_synthetic_batch",
    "MemberSampler",
    "sample_member",
    "stochastic_step",
]


@dataclass(frozen=True)
class MatrixBatch:
    """K symmetric matrices plus their mean (the oracle target)."""

    members: np.ndarray  # shape (K, n, n)
    mean: np.ndarray     # shape (n, n)

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def dim(self) -> int:
        return self.members.shape[1]


def matrix_batch(members) -> MatrixBatch:
    """Wrap a (K, n, n) stack of symmetric matrices, computing the mean."""
    members = np.asarray(members, dtype=np.float64)
    if members.ndim != 3 or members.shape[1] != members.shape[2]:
        raise DimensionMismatch(f"expected (K, n, n) members, got shape {members.shape}")
    if members.shape[0] < 1:
        raise EmptyBatch("a batch needs at least one member")
    return MatrixBatch(members=members, mean=members.mean(axis=0))


def make_synthetic_batch(a, size: int, sigma_scale: float = 0.25, seed: int = 0) -> MatrixBatch:
    """Batch of ``size`` noisy copies of ``a``.

    Member k is ``a + sigma_scale * (X_k + X_k^T) / sqrt(n)`` with standard
    normal X_k, so each member is bitwise symmetric when ``a`` is.  The
    stored mean is recomputed from the realized members; that mean, not
    ``a``, is the quantity a stochastic run estimates.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    rng = np.random.Generator(np.random.Philox(key=seed))
    raw = rng.standard_normal((size, n, n))
    perturbations = (raw + np.transpose(raw, (0, 2, 1))) * (sigma_scale / np.sqrt(n))
    return matrix_batch(a[None, :, :] + perturbations)


class MemberSampler:
    """Uniform member indices from a counter-based (Philox) generator.

    The same (seed, stream) always yields the same index sequence on every
    platform.  Concurrent trajectories sharing one seed should each take
    their own ``stream`` number: stream i uses the generator jumped i times,
    so the streams never overlap.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed
        self.stream = stream
        self.draws = 0
        bitgen = np.random.Philox(key=seed)
        if stream:
            bitgen = bitgen.jumped(stream)
        self._rng = np.random.Generator(bitgen)

    def draw(self, size: int) -> int:
        """Next uniform index in 0..size-1."""
        self.draws += 1
        return int(self._rng.integers(0, size))


def sample_member(batch: MatrixBatch, sampler: MemberSampler) -> tuple[int, np.ndarray]:
    """Draw one member uniformly; returns (index, view of that member)."""
    if batch.size < 1:
        raise EmptyBatch("cannot sample from an empty batch")
    index = sampler.draw(batch.size)
    return index, batch.members[index]


def stochastic_step(
    state: OptimizerState,
    problem: Problem,
    batch: MatrixBatch,
    sampler: MemberSampler,
    schedule: Optional[Schedule],
    step_size: float,
    kind: IntegratorKind,
    damp_log: Optional[list] = None,
) -> OptimizerState:
    """One integrator step with the objective matrix replaced by a fresh draw.

    The problem's own matrix is ignored; one member serves every force
    evaluation inside the step.  Group and skew preservation are untouched
    because only the force changes.
    """
    if batch.dim != problem.dim:
        raise DimensionMismatch(
            f"batch dimension {batch.dim} does not match problem dimension {problem.dim}"
        )
    _, member = sample_member(batch, sampler)
    sampled = replace(problem, matrix=member)
    return integrator_step(state, sampled, schedule, step_size, kind, damp_log=damp_log)
