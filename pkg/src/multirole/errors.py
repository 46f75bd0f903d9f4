"""Exception types shared across the kernel."""

from __future__ import annotations


class KernelError(Exception):
    """Base class for every kernel-level failure."""


class UniverseMismatch(KernelError):
    """A role, subset, or endomorphism does not fit the session universe."""


class SurfaceError(KernelError):
    """Parse-level failure; carries source position and a stable code.

    Codes: "syntax", "universe", "bang-in-mrl".
    """

    def __init__(self, message: str, *, code: str = "syntax", line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.code = code
        self.line = line
        self.col = col


class TransformError(KernelError):
    """Precondition failure of an admissible-rule constructor."""


class NoEmptyInterpretation(TransformError):
    pass


class ComplementsOverlap(TransformError):
    pass


class CutFormulaMismatch(TransformError):
    pass


class NotDisjoint(TransformError):
    pass


class RoleSetMismatch(TransformError):
    pass


class PartitionInvalid(TransformError):
    pass


class LMRLMode(TransformError):
    """Operation (or operand shape) not available in linear mode."""


class LMRLNonEmptyContext(TransformError):
    pass


class MetricRegression(KernelError):
    """A recursive construction step failed to decrease its termination metric."""


class SearchError(KernelError):
    pass


class QuantifierInGoal(SearchError):
    pass


class SpaceTooLarge(SearchError):
    pass
