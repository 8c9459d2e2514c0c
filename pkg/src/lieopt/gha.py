"""Hebbian-flow baseline for head-to-head benchmarks.

The baseline evolves an n x l matrix V by

    dV/dt = (I - B V V^T) A V

whose long-time limit spans the leading (generalized) eigenvectors.  Unlike
the group integrators it does not preserve V^T B V = I exactly; the drift of
that Gram matrix is a measured output.  Discretizations: forward Euler and
classical RK4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import DimensionMismatch

__all__ = ["GhaState", "gha_field", "gha_euler_step", "gha_rk4_step", "gha_initialize"]


@dataclass(frozen=True)
class GhaState:
    basis: np.ndarray  # n x l
    step_index: int


def gha_field(basis: np.ndarray, a: np.ndarray, b: Optional[np.ndarray] = None) -> np.ndarray:
    """(I - B V V^T) A V, with B = I when ``b`` is None."""
    if basis.ndim != 2 or basis.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"basis shape {basis.shape} does not match matrix shape {a.shape}"
        )
    image = a @ basis
    gram_image = basis @ (basis.T @ image)
    if b is None:
        return image - gram_image
    return image - b @ gram_image


def gha_euler_step(state: GhaState, a, b=None, step_size: float = 0.01) -> GhaState:
    """Forward Euler: V + h (I - B V V^T) A V."""
    basis = state.basis + step_size * gha_field(state.basis, a, b)
    return GhaState(basis=basis, step_index=state.step_index + 1)


def gha_rk4_step(state: GhaState, a, b=None, step_size: float = 0.01) -> GhaState:
    """Classical four-stage Runge-Kutta on the same field."""
    h = step_size
    v = state.basis
    k1 = gha_field(v, a, b)
    k2 = gha_field(v + (0.5 * h) * k1, a, b)
    k3 = gha_field(v + (0.5 * h) * k2, a, b)
    k4 = gha_field(v + h * k3, a, b)
    basis = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return GhaState(basis=basis, step_index=state.step_index + 1)


def gha_initialize(n: int, leading: int, chol: Optional[np.ndarray] = None) -> GhaState:
    """First l columns of the identity, or of L^(-1) when a Cholesky factor
    of the constraint is given (the latter starts exactly on the group)."""
    eye_cols = np.eye(n, leading)
    if chol is None:
        return GhaState(basis=eye_cols, step_index=0)
    return GhaState(basis=solve_triangular(chol, eye_cols, lower=False), step_index=0)
