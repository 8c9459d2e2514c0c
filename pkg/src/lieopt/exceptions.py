"""Exception types raised by the library."""


class LieoptError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatch(LieoptError, ValueError):
    """Operands have incompatible shapes."""


class NotPositiveDefinite(LieoptError, ValueError):
    """Cholesky pivot fell below the positive-definiteness threshold."""


class SingularSolve(LieoptError):
    """A linear solve failed; the input violated an upstream invariant."""


class NoConvergence(LieoptError):
    """The iterative eigensolver exhausted its sweep budget."""


class EmptyBatch(LieoptError, ValueError):
    """A matrix batch with no members was supplied."""


class BadMagic(LieoptError, ValueError):
    """IDX stream does not start with a recognized magic number."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class TruncatedPayload(LieoptError, ValueError):
    """IDX stream ended before the declared payload was complete."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class DimensionOverflow(LieoptError, ValueError):
    """An IDX header declares an implausibly large dimension."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class BadShape(LieoptError, ValueError):
    """An image does not have the shape required by the pipeline."""


class EmptyClass(LieoptError, ValueError):
    """A class label in 0..M-1 has no data points."""


class ZeroMatrix(LieoptError, ValueError):
    """A matrix that must be nonzero is zero."""
