"""Dense matrix kernels: symmetric/skew enforcement, Cholesky, rational
exponential approximants that preserve orthogonality, and a self-contained
Jacobi eigensolver used as the ground-truth oracle.

Conventions
-----------
* Symmetric matrices are symmetrized on ingest: ``(M + M.T) / 2``.
* Skew matrices are produced by explicit antisymmetrization
  ``(C - C.T) / 2``, which is bitwise skew in IEEE arithmetic, so skewness
  never drifts over long runs.
* ``cholesky`` returns the upper-triangular factor ``L`` with ``B = L.T @ L``.
* The Jacobi solver shares no code path with the production solves
  (which use LU via ``numpy.linalg.solve``), keeping verification independent.
"""

from __future__ import annotations

import warnings

import numpy as np
from numba import njit
from scipy.linalg import lu_factor, lu_solve

from .exceptions import DimensionMismatch, NoConvergence, NotPositiveDefinite, SingularSolve

__all__ = [
    "symmetrize",
    "skew_part",
    "cholesky",
    "cayley",
    "pade22_exp",
    "commutator",
    "jacobi_eigh",
    "spectral_norm",
]

_EPS = np.finfo(np.float64).eps


def _as_square(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be a square matrix, got shape {m.shape}")
    return m


def symmetrize(m) -> np.ndarray:
    """Return ``(m + m.T) / 2``; bitwise symmetric."""
    m = _as_square(m, "m")
    return (m + m.T) / 2.0


def skew_part(m) -> np.ndarray:
    """Return ``(m - m.T) / 2``; bitwise skew with exactly zero diagonal."""
    m = _as_square(m, "m")
    return (m - m.T) / 2.0


def cholesky(b) -> np.ndarray:
    """Upper-triangular ``L`` with ``b = L.T @ L`` for symmetric positive definite ``b``.

    Raises
    ------
    NotPositiveDefinite
        If any pivot is <= ``n * eps * max(abs(b))``.
    """
    b = _as_square(b, "b")
    n = b.shape[0]
    limit = n * _EPS * (np.max(np.abs(b)) if b.size else 0.0)
    upper = np.zeros_like(b)
    for j in range(n):
        pivot = b[j, j] - upper[:j, j] @ upper[:j, j]
        if pivot <= limit:
            raise NotPositiveDefinite(
                f"pivot {pivot:.3e} at index {j} is below threshold {limit:.3e}"
            )
        upper[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            upper[j, j + 1:] = (b[j, j + 1:] - upper[:j, j] @ upper[:j, j + 1:]) / upper[j, j]
    return upper


def _rational_exp(x, step: float, second_order_coeff: float) -> np.ndarray:
    x = _as_square(x, "x")
    n = x.shape[0]
    half = (0.5 * step) * x
    eye = np.eye(n)
    if second_order_coeff == 0.0:
        numer = eye + half
        denom = eye - half
    else:
        y = step * x
        quad = second_order_coeff * (y @ y)
        numer = eye + half + quad
        denom = eye - half + quad
    try:
        with warnings.catch_warnings(), np.errstate(all="ignore"):
            warnings.simplefilter("ignore")
            q = lu_solve(lu_factor(denom, check_finite=False), numer, check_finite=False)
    except (ValueError, np.linalg.LinAlgError) as err:
        raise SingularSolve("denominator singular; input was not skew") from err
    if not np.all(np.isfinite(q)):
        raise SingularSolve("non-finite solve result; input was not skew or not finite")
    return q


def cayley(x, step: float = 1.0) -> np.ndarray:
    """``(I - step*x/2)^(-1) (I + step*x/2)``.

    For skew ``x`` the result is orthogonal to roundoff and matches
    ``expm(step*x)`` to O(step^3).  Solved with LU and partial pivoting.
    """
    return _rational_exp(x, step, 0.0)


def pade22_exp(x, step: float = 1.0) -> np.ndarray:
    """Diagonal (2,2) rational approximant of ``expm(step*x)``.

    ``(I - y/2 + y^2/12)^(-1) (I + y/2 + y^2/12)`` with ``y = step*x``.
    For skew ``x`` the result is orthogonal to roundoff and matches the
    exponential to O(step^5).
    """
    return _rational_exp(x, step, 1.0 / 12.0)


def commutator(m, p) -> np.ndarray:
    """``m @ p - p @ m``, antisymmetrized so the result is bitwise skew."""
    m = _as_square(m, "m")
    p = _as_square(p, "p")
    if m.shape != p.shape:
        raise DimensionMismatch(f"operand shapes differ: {m.shape} vs {p.shape}")
    c = m @ p - p @ m
    return (c - c.T) / 2.0


@njit(cache=True)
def _jacobi_sweeps(a, v, threshold, max_sweeps):  # pragma: no cover - jitted
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = np.sqrt(2.0 * off)
        if off <= threshold:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = 0.5 * (aqq - app) / apq
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    if i != p and i != q:
                        aip = a[i, p]
                        aiq = a[i, q]
                        a[i, p] = c * aip - s * aiq
                        a[p, i] = a[i, p]
                        a[i, q] = s * aip + c * aiq
                        a[q, i] = a[i, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += a[i, j] * a[i, j]
    off = np.sqrt(2.0 * off)
    if off <= threshold:
        return max_sweeps
    return -1


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like
        Symmetric matrix (symmetrized on ingest).
    tol : float
        Sweeps stop once the off-diagonal Frobenius mass drops below
        ``tol * ||a||_F``.
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`NoConvergence`.

    Returns
    -------
    (values, vectors)
        ``values`` sorted descending (ties keep original index order),
        ``vectors`` orthonormal with ``a @ vectors[:, k] ~= values[k] * vectors[:, k]``.
    """
    work = np.ascontiguousarray(symmetrize(a))
    n = work.shape[0]
    if n == 0:
        raise DimensionMismatch("cannot decompose an empty matrix")
    vectors = np.eye(n)
    threshold = tol * np.linalg.norm(work)
    sweeps = _jacobi_sweeps(work, vectors, threshold, max_sweeps)
    if sweeps < 0:
        raise NoConvergence(f"off-diagonal mass still above threshold after {max_sweeps} sweeps")
    values = np.diag(work).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def spectral_norm(a) -> float:
    """Largest absolute eigenvalue of a symmetric matrix (via :func:`jacobi_eigh`)."""
    values, _ = jacobi_eigh(a)
    return float(max(abs(values[0]), abs(values[-1])))
