"""Discrete flows on the constraint group.

All steppers multiply the group element by a rational approximant of a skew
exponential, so point^T B point = I is preserved to roundoff, and they only
ever add or rescale skew matrices, so the velocity stays bitwise skew.

* ``gd_step``: first order.  One force evaluation, one Cayley drift.
* ``nag_strang_step``: second order.  Symmetric kick / damp / drift / damp /
  kick split of the momentum dynamics; the two damp substeps multiply the
  velocity by exactly r(t_i)/r(t_{i+1/2}) and r(t_{i+1/2})/r(t_{i+1}), which
  is what makes the map conformal symplectic.
* ``nag_order4_step``: fourth order.  Palindromic composition of exact
  damped-kick blocks with fourth-order rational drifts.  Two coefficient
  sets: "4a" (13 stages, smaller error constant) and "4b" (7 stages, the
  classic cube-root triple jump).

Schedule time advances only inside the damped-kick blocks; drifts do not
consume time.  After a full step the clock is pinned back to
(step_index + 1) * h so no quadrature of the substep lengths accumulates
over long runs.
"""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np

from .linalg import cayley, pade22_exp
from .problems import Problem, force, objective
from .schedules import Schedule, damp_factor, kick_weight
from .state import OptimizerState

__all__ = [
    "OptimizerState",
    "IntegratorKind",
    "INTEGRATOR_KINDS",
    "gd_step",
    "nag_strang_step",
    "nag_order4_step",
    "integrator_step",
    "energy",
]

IntegratorKind = Literal["gd", "strang", "4a", "4b"]
INTEGRATOR_KINDS = ("gd", "strang", "4a", "4b")

# Palindromic fourth-order composition coefficients.  The a_k scale the
# damped-kick blocks (they sum to 1 and carry the schedule clock), the b_k
# scale the drifts.  "4a" trades five extra stages for a smaller error
# constant; "4b" is the cube-root triple jump.
_A_4A = (0.079203696431196, 0.353172906049774, -0.042065080357719, 0.219376955753500)
_B_4A = (0.209515106613362, -0.143851773179818, 0.434336666566456)
_CUBE_ROOT_WEIGHT = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_A_4B = (_CUBE_ROOT_WEIGHT / 2.0, (1.0 - _CUBE_ROOT_WEIGHT) / 2.0)
_B_4B = (_CUBE_ROOT_WEIGHT, 1.0 - 2.0 * _CUBE_ROOT_WEIGHT)


def _is_bordered(velocity: np.ndarray, leading: int) -> bool:
    """True when only the off-diagonal blocks that couple the leading columns
    to the rest are populated (exact zeros elsewhere)."""
    return not (velocity[:leading, :leading].any() or velocity[leading:, leading:].any())


def _drift(
    point: np.ndarray,
    velocity: np.ndarray,
    tau: float,
    leading: Optional[int],
    fourth_order: bool,
) -> np.ndarray:
    """point times the rational approximant of expm(tau * velocity).

    For leading-l problems the velocity is bordered (rank 2l), so the inverse
    in the approximant collapses, through the usual low-rank update identity,
    to a 2l x 2l solve:

        Q = I + C1 (I + M K)^(-1) C2^T,
        C1 = [y[:, :l] | E],  C2 = [E | -y[:, :l]],  K = C2^T C1,
        M = -I/2 (Cayley) or -I/2 + K/12 (fourth order),

    with y = tau * velocity and E the first l columns of the identity.  This
    is algebraically identical to the dense LU route (which remains the
    fallback for full velocities) and keeps long runs affordable.
    """
    n = point.shape[0]
    l = leading
    if l is None or 4 * l > n or not _is_bordered(velocity, l):
        approximant = pade22_exp if fourth_order else cayley
        return point @ approximant(velocity, tau)
    cols = tau * velocity[:, :l]                       # y[:, :l]
    two_l = 2 * l
    k = np.zeros((two_l, two_l))
    k[:l, l:] = np.eye(l)
    k[l:, :l] = -cols.T @ cols
    m = k / 12.0 if fourth_order else np.zeros((two_l, two_l))
    m[np.arange(two_l), np.arange(two_l)] -= 0.5
    core = np.eye(two_l) + m @ k
    scaled = np.linalg.solve(core, np.eye(two_l))
    left = np.concatenate([point @ cols, point[:, :l]], axis=1) @ scaled
    out = point - left[:, l:] @ cols.T
    out[:, :l] += left[:, :l]
    return out


# 13 stages, palindromic with the a_4 kick block at the center.
_STAGES_4A = (
    ("kick", _A_4A[0]), ("drift", _B_4A[0]),
    ("kick", _A_4A[1]), ("drift", _B_4A[1]),
    ("kick", _A_4A[2]), ("drift", _B_4A[2]),
    ("kick", _A_4A[3]),
    ("drift", _B_4A[2]), ("kick", _A_4A[2]),
    ("drift", _B_4A[1]), ("kick", _A_4A[1]),
    ("drift", _B_4A[0]), ("kick", _A_4A[0]),
)

# 7 stages, palindromic with the b_2 drift at the center.
_STAGES_4B = (
    ("kick", _A_4B[0]), ("drift", _B_4B[0]),
    ("kick", _A_4B[1]),
    ("drift", _B_4B[1]),
    ("kick", _A_4B[1]),
    ("drift", _B_4B[0]), ("kick", _A_4B[0]),
)


def gd_step(state: OptimizerState, problem: Problem, step_size: float) -> OptimizerState:
    """One descent step: drift along the Cayley transform of the force.

    The velocity is carried through untouched.  The objective is
    non-increasing for step sizes small relative to 1/||A||.
    """
    f = force(problem, state.point)
    point = _drift(state.point, f, step_size, problem.leading, fourth_order=False)
    i = state.step_index + 1
    return OptimizerState(point=point, velocity=state.velocity, step_index=i, time=i * step_size)


def nag_strang_step(
    state: OptimizerState,
    problem: Problem,
    schedule: Schedule,
    step_size: float,
    damp_log: Optional[list] = None,
) -> OptimizerState:
    """One second-order momentum step (five substeps).

    half-kick -> exact damp over [t_i, t_{i+1/2}] -> Cayley drift ->
    exact damp over [t_{i+1/2}, t_{i+1}] -> half-kick at the new point.

    If ``damp_log`` is a list, the two (t_a, t_b, factor) damp applications
    are appended to it, which lets tests assert the factors are applied
    exactly.
    """
    h = step_size
    i = state.step_index
    t_start = i * h
    t_mid = (i + 0.5) * h
    t_end = (i + 1.0) * h

    vel = state.velocity + (0.5 * h) * force(problem, state.point)
    first = damp_factor(schedule, t_start, t_mid)
    vel = vel * first
    point = _drift(state.point, vel, h, problem.leading, fourth_order=False)
    second = damp_factor(schedule, t_mid, t_end)
    vel = vel * second
    vel = vel + (0.5 * h) * force(problem, point)
    if damp_log is not None:
        damp_log.append((t_start, t_mid, first))
        damp_log.append((t_mid, t_end, second))
    return OptimizerState(point=point, velocity=vel, step_index=i + 1, time=t_end)


def nag_order4_step(
    state: OptimizerState,
    problem: Problem,
    schedule: Schedule,
    step_size: float,
    version: Literal["4a", "4b"] = "4a",
    damp_log: Optional[list] = None,
) -> OptimizerState:
    """One fourth-order momentum step.

    Each kick block spans an interval of length a_k * h and is realized as
    exact damp over the first half, a frozen-force impulse with the exact
    integrated weight, then exact damp over the second half; that makes the
    block the exact flow of the damped-kick dynamics, so the composition
    order is capped only by the drift approximant (fourth-order diagonal
    rational).  Drifts use the current velocity and consume no schedule time.
    """
    if version == "4a":
        stages = _STAGES_4A
    elif version == "4b":
        stages = _STAGES_4B
    else:
        raise ValueError(f"unknown fourth-order version: {version!r}")
    h = step_size
    i = state.step_index
    point = state.point
    vel = state.velocity
    t = i * h
    for kind, coeff in stages:
        if kind == "kick":
            tau = coeff * h
            t_mid = t + 0.5 * tau
            t_end = t + tau
            f = force(problem, point)
            first = damp_factor(schedule, t, t_mid)
            vel = vel * first
            vel = vel + kick_weight(schedule, t, t_end) * f
            second = damp_factor(schedule, t_mid, t_end)
            vel = vel * second
            if damp_log is not None:
                damp_log.append((t, t_mid, first))
                damp_log.append((t_mid, t_end, second))
            t = t_end
        else:
            point = _drift(point, vel, coeff * h, problem.leading, fourth_order=True)
    return OptimizerState(point=point, velocity=vel, step_index=i + 1, time=(i + 1) * h)


def integrator_step(
    state: OptimizerState,
    problem: Problem,
    schedule: Optional[Schedule],
    step_size: float,
    kind: IntegratorKind,
    damp_log: Optional[list] = None,
) -> OptimizerState:
    """Dispatch a single step of the requested integrator."""
    if kind == "gd":
        return gd_step(state, problem, step_size)
    if schedule is None:
        raise ValueError(f"integrator {kind!r} requires a dissipation schedule")
    if kind == "strang":
        return nag_strang_step(state, problem, schedule, step_size, damp_log=damp_log)
    if kind in ("4a", "4b"):
        return nag_order4_step(state, problem, schedule, step_size, version=kind, damp_log=damp_log)
    raise ValueError(f"unknown integrator kind: {kind!r}")


def energy(state: OptimizerState, problem: Problem) -> float:
    """Kinetic plus potential energy: 0.5 ||velocity||_F^2 + objective(point).

    Along the momentum flow this is a Lyapunov function, decaying at the
    rate gamma * ||velocity||_F^2.
    """
    kinetic = 0.5 * float(np.sum(state.velocity * state.velocity))
    return kinetic + objective(problem, state.point)
