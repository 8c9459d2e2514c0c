"""Objective, force, initial condition, solution extraction and ground truth
for the three problem classes:

* full-spectrum: minimize tr(R^T A R N) with N = diag(1..n), which sorts the
  whole spectrum (largest eigenvalue first);
* leading-l eigenvalues: minimize -tr of the top-left l x l block of R^T A R
  on the orthogonal group;
* leading-l generalized eigenvalues: same dynamics on the group
  {R : R^T B R = I}, entered through the initial condition R0 = L^(-1) where
  B = L^T L.  B itself never appears in the iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular

from .exceptions import DimensionMismatch
from .linalg import cholesky, jacobi_eigh, symmetrize
from .state import OptimizerState

__all__ = [
    "Problem",
    "GroundTruth",
    "full_spectrum",
    "leading_ev",
    "leading_gev",
    "objective",
    "force",
    "initial_state",
    "extract_solution",
    "ground_truth",
    "error_metrics",
]


@dataclass(frozen=True)
class Problem:
    """A frozen problem description.

    ``leading`` is None for the full-spectrum objective.  ``constraint`` and
    ``chol`` are None when the constraint is the identity (plain eigenvalue
    problem); otherwise ``chol`` is the upper-triangular factor with
    ``constraint = chol.T @ chol``.
    """

    matrix: np.ndarray
    leading: Optional[int] = None
    constraint: Optional[np.ndarray] = None
    chol: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def subspace_dim(self) -> int:
        return self.dim if self.leading is None else self.leading


def _ingest_symmetric(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return symmetrize(a)


def full_spectrum(a) -> Problem:
    """Sort the entire spectrum of ``a``."""
    return Problem(matrix=_ingest_symmetric(a))


def leading_ev(a, leading: int) -> Problem:
    """Find the ``leading`` largest eigenvalues of ``a``."""
    a = _ingest_symmetric(a)
    if not 1 <= leading <= a.shape[0]:
        raise DimensionMismatch(f"leading must be in 1..{a.shape[0]}, got {leading}")
    return Problem(matrix=a, leading=leading)


def leading_gev(a, b, leading: int) -> Problem:
    """Find the ``leading`` largest generalized eigenvalues of (a, b).

    ``b`` must be symmetric positive definite; its Cholesky factor is taken
    here (raising NotPositiveDefinite otherwise) and reused everywhere.
    """
    a = _ingest_symmetric(a)
    b = _ingest_symmetric(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"matrix shapes differ: {a.shape} vs {b.shape}")
    if not 1 <= leading <= a.shape[0]:
        raise DimensionMismatch(f"leading must be in 1..{a.shape[0]}, got {leading}")
    return Problem(matrix=a, leading=leading, constraint=b, chol=cholesky(b))


def objective(problem: Problem, point: np.ndarray) -> float:
    """The scalar being minimized at group element ``point``."""
    a = problem.matrix
    if point.shape != a.shape:
        raise DimensionMismatch(f"point shape {point.shape} does not match problem dim {a.shape}")
    if problem.leading is None:
        weights = np.arange(1.0, a.shape[0] + 1.0)
        return float(weights @ np.einsum("ij,ij->j", point, a @ point))
    cols = point[:, : problem.leading]
    return float(-np.einsum("ij,ij->", cols, a @ cols))


def force(problem: Problem, point: np.ndarray) -> np.ndarray:
    """Minus the trivialized gradient: the skew matrix driving descent.

    Zero exactly when the leading block of R^T A R decouples from the rest
    (or, full-spectrum, when R^T A R is diagonal).  Invariant under
    A -> A + lambda*I whenever R^T R = I.
    """
    a = problem.matrix
    n = a.shape[0]
    if point.shape != a.shape:
        raise DimensionMismatch(f"point shape {point.shape} does not match problem dim {a.shape}")
    if problem.leading is None:
        m = point.T @ (a @ point)
        weights = np.arange(1.0, n + 1.0)
        c = weights[:, None] * m - m * weights[None, :]
        return (c - c.T) / 2.0
    l = problem.leading
    block = point.T @ (a @ point[:, :l])
    f = np.zeros((n, n))
    f[l:, :l] = block[l:, :]
    f[:l, l:] = -block[l:, :].T
    return f


def initial_state(problem: Problem) -> OptimizerState:
    """Identity start for plain problems; L^(-1) (triangular solve) otherwise.
    Momentum starts at zero."""
    n = problem.dim
    if problem.chol is None:
        point = np.eye(n)
    else:
        point = solve_triangular(problem.chol, np.eye(n), lower=False)
    return OptimizerState(point=point, velocity=np.zeros((n, n)), step_index=0, time=0.0)


def extract_solution(problem: Problem, point: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """First l columns of the group element plus their compressed eigenvalue
    estimates (eigenvalues of V^T A V, sorted descending)."""
    l = problem.subspace_dim
    basis = point[:, :l]
    compressed = symmetrize(basis.T @ (problem.matrix @ basis))
    estimates, _ = jacobi_eigh(compressed)
    return basis, estimates


@dataclass(frozen=True)
class GroundTruth:
    """Reference answer from the Jacobi oracle.

    ``values``: the l largest (generalized) eigenvalues, descending.
    ``basis``: n x l matrix with basis^T B basis = I spanning their eigenspace.
    """

    values: np.ndarray
    basis: np.ndarray


def ground_truth(problem: Problem) -> GroundTruth:
    """Solve the problem independently by dense reduction + Jacobi sweeps.

    For the generalized case the pencil is reduced with triangular solves
    (never an explicit inverse): Ahat = L^(-T) A L^(-1), then the basis is
    mapped back through L^(-1).
    """
    a = problem.matrix
    l = problem.subspace_dim
    if problem.chol is None:
        values, vectors = jacobi_eigh(a)
        return GroundTruth(values=values[:l], basis=vectors[:, :l])
    upper = problem.chol
    half = solve_triangular(upper, a, trans="T", lower=False)        # L^(-T) A
    reduced = solve_triangular(upper, half.T, trans="T", lower=False).T  # L^(-T) A L^(-1)
    values, vectors = jacobi_eigh(symmetrize(reduced))
    basis = solve_triangular(upper, vectors[:, :l], lower=False)     # L^(-1) U
    return GroundTruth(values=values[:l], basis=basis)


def error_metrics(problem: Problem, point: np.ndarray, truth: GroundTruth) -> tuple[float, float]:
    """(eigenvalue error, subspace error) of the current iterate.

    Eigenvalue error is the l1 distance between the compressed estimates and
    the reference values.  Subspace error is the Frobenius distance between
    the B-orthogonal projectors V V^T B and W W^T B, which is basis-free and
    reduces to the ordinary projector distance when B = I.
    """
    basis, estimates = extract_solution(problem, point)
    eig_err = float(np.sum(np.abs(estimates - truth.values)))
    b = problem.constraint
    if b is None:
        proj_have = basis @ basis.T
        proj_want = truth.basis @ truth.basis.T
    else:
        proj_have = basis @ (basis.T @ b)
        proj_want = truth.basis @ (truth.basis.T @ b)
    subspace_err = float(np.linalg.norm(proj_have - proj_want))
    return eig_err, subspace_err
