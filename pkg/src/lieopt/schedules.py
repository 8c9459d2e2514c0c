"""Dissipation schedules.

A schedule encodes the positive weight function r(t) whose logarithmic
derivative gamma(t) = r'(t)/r(t) damps the momentum.  Integrators never
evaluate gamma directly; they ask for the exact multiplicative factor
r(t_a)/r(t_b) over a substep (``damp_factor``) and for the exact impulse
weight of a frozen force over a substep (``kick_weight``).  Both are ratios
of r values, so they stay finite even when r itself would overflow.

Supported schedules:

* ``ConstantGamma(gamma)``  -> r(t) = exp(gamma * t)
* ``NagC()``                -> r(t) = t**3           (gamma(t) = 3/t)
* ``Corrected(base, c)``    -> r(t) = base_r(t) * exp(c * t**2 / 2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = ["ConstantGamma", "NagC", "Corrected", "Schedule", "damp_factor", "kick_weight"]

# Nodes/weights for the Gauss-Legendre rule used when no closed form exists
# (corrected schedules).  16 points is machine-exact for the smooth, slowly
# varying integrands that occur over a single substep.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class ConstantGamma:
    """Constant friction; gamma = 0 means no dissipation."""

    gamma: float = 1.0

    def __post_init__(self):
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class NagC:
    """Time-decaying friction gamma(t) = 3/t."""


@dataclass(frozen=True)
class Corrected:
    """A base schedule with the extra +c*t friction that restores convergence
    under stochastic forces."""

    base: Union[ConstantGamma, NagC]
    c: float = 0.01

    def __post_init__(self):
        if not isinstance(self.base, (ConstantGamma, NagC)):
            raise TypeError("base must be ConstantGamma or NagC")
        if self.c <= 0.0:
            raise ValueError(f"c must be > 0, got {self.c}")


Schedule = Union[ConstantGamma, NagC, Corrected]


def _r_ratio(schedule: Schedule, s: float, t_ref: float) -> float:
    """r(s) / r(t_ref), evaluated without forming either r value."""
    if isinstance(schedule, ConstantGamma):
        return math.exp(schedule.gamma * (s - t_ref))
    if isinstance(schedule, NagC):
        if s == t_ref:
            return 1.0
        if t_ref == 0.0:
            return math.inf
        return (s / t_ref) ** 3
    base = _r_ratio(schedule.base, s, t_ref)
    return base * math.exp(0.5 * schedule.c * (s * s - t_ref * t_ref))


def damp_factor(schedule: Schedule, t_a: float, t_b: float) -> float:
    """Exact momentum multiplier r(t_a)/r(t_b) over [t_a, t_b].

    For t_b >= t_a >= 0 the factor lies in [0, 1]; in particular the 3/t
    schedules give exactly 0 when t_a = 0 < t_b and 1 when t_a = t_b = 0.
    The formula is also valid for t_b < t_a (a backward substep), where it
    exceeds 1.
    """
    if t_a == t_b:
        return 1.0
    return _r_ratio(schedule, t_a, t_b)


def _kick_quadrature(schedule: Schedule, t_a: float, t_b: float, t_mid: float) -> float:
    half_len = 0.5 * (t_b - t_a)
    centre = 0.5 * (t_a + t_b)
    total = 0.0
    for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
        s = centre + half_len * node
        total += weight * _r_ratio(schedule, s, t_mid)
    return half_len * total


def kick_weight(schedule: Schedule, t_a: float, t_b: float) -> float:
    """Exact impulse weight of a frozen force over [t_a, t_b].

    Equals ``integral(r(s) ds, t_a..t_b) / r(t_mid)`` with
    ``t_mid = (t_a + t_b)/2``.  Sandwiched between the two exact half-interval
    damp factors this realizes the damped-kick subflow exactly, so composed
    splittings keep their design order; the naive weight ``t_b - t_a`` would
    cap them at order two.  Reduces to ``t_b - t_a`` when gamma = 0.
    """
    if t_a == t_b:
        return 0.0
    t_mid = 0.5 * (t_a + t_b)
    if isinstance(schedule, ConstantGamma):
        g = schedule.gamma
        if g == 0.0:
            return t_b - t_a
        return 2.0 * math.sinh(0.5 * g * (t_b - t_a)) / g
    if isinstance(schedule, NagC):
        # integral of s^3 over [t_a, t_b] divided by t_mid^3
        return (t_b**4 - t_a**4) / (4.0 * t_mid**3)
    return _kick_quadrature(schedule, t_a, t_b, t_mid)
