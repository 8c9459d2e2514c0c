"""The phase point advanced by every integrator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["OptimizerState"]


@dataclass(frozen=True)
class OptimizerState:
    """Group element, trivialized velocity, and step bookkeeping.

    ``point`` is the n x n group element (point^T B point = I up to tracked
    drift).  ``velocity`` is the skew matrix at the identity; skewness is
    preserved bitwise by every step.  ``time`` equals step_index times the
    step size in effect.
    """

    point: np.ndarray
    velocity: np.ndarray
    step_index: int
    time: float

    def group_drift(self, constraint: np.ndarray | None = None) -> float:
        """Frobenius distance of point^T B point from the identity."""
        if constraint is None:
            gram = self.point.T @ self.point
        else:
            gram = self.point.T @ (constraint @ self.point)
        return float(np.linalg.norm(gram - np.eye(gram.shape[0])))

    def skew_drift(self) -> float:
        """Frobenius norm of velocity + velocity^T; exactly 0 when skew."""
        return float(np.linalg.norm(self.velocity + self.velocity.T))
