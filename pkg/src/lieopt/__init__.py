"""Momentum-accelerated variational optimization on the matrix group
{R : R^T B R = I}, specialized to leading (generalized) eigenvalue problems.

The integrators preserve the group constraint to roundoff and keep the
trivialized velocity bitwise skew; dissipation is applied through exact damp
factors, which makes the momentum methods conformal symplectic.
"""

from .exceptions import (
    BadMagic,
    BadShape,
    DimensionMismatch,
    DimensionOverflow,
    EmptyBatch,
    EmptyClass,
    LieoptError,
    NoConvergence,
    NotPositiveDefinite,
    SingularSolve,
    TruncatedPayload,
    ZeroMatrix,
)
from .linalg import (
    cayley,
    cholesky,
    commutator,
    jacobi_eigh,
    pade22_exp,
    skew_part,
    spectral_norm,
    symmetrize,
)
from .schedules import ConstantGamma, Corrected, NagC, damp_factor, kick_weight
from .state import OptimizerState
from .integrators import (
    INTEGRATOR_KINDS,
    energy,
    gd_step,
    integrator_step,
    nag_order4_step,
    nag_strang_step,
)
from .problems import (
    GroundTruth,
    Problem,
    error_metrics,
    extract_solution,
    force,
    full_spectrum,
    ground_truth,
    initial_state,
    leading_ev,
    leading_gev,
    objective,
)
from .stochastic import (
    MatrixBatch,
    MemberSampler,
    make_synthetic_batch,
    matrix_batch,
    sample_member,
    stochastic_step,
)
from .gha import GhaState, gha_euler_step, gha_field, gha_initialize, gha_rk4_step
from . import dataio, run, trace

__version__ = "0.1.0"

__all__ = [
    "BadMagic", "BadShape", "DimensionMismatch", "DimensionOverflow",
    "EmptyBatch", "EmptyClass", "LieoptError", "NoConvergence",
    "NotPositiveDefinite", "SingularSolve", "TruncatedPayload", "ZeroMatrix",
    "cayley", "cholesky", "commutator", "jacobi_eigh", "pade22_exp",
    "skew_part", "spectral_norm", "symmetrize",
    "ConstantGamma", "Corrected", "NagC", "damp_factor", "kick_weight",
    "OptimizerState", "INTEGRATOR_KINDS", "energy", "gd_step",
    "integrator_step", "nag_order4_step", "nag_strang_step",
    "GroundTruth", "Problem", "error_metrics", "extract_solution", "force",
    "full_spectrum", "ground_truth", "initial_state", "leading_ev",
    "leading_gev", "objective",
    "MatrixBatch", "MemberSampler", "make_synthetic_batch", "matrix_batch",
    "sample_member", "stochastic_step",
    "GhaState", "gha_euler_step", "gha_field", "gha_initialize", "gha_rk4_step",
    "dataio", "run", "trace",
]
