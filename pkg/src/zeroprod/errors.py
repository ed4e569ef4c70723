"""Exception hierarchy.

The CLI maps these onto exit codes, so keep the split between "the input
is not a preserver" (a mathematical answer) and "the input is malformed or
unsupported" (a usage problem).
"""


class ZeroprodError(Exception):
    """Base class for all errors raised by this package."""


class FieldError(ZeroprodError, ValueError):
    """Invalid field description, or operands over different fields."""


class DimensionError(ZeroprodError, ValueError):
    """Shapes do not conform."""


class SingularMatrixError(ZeroprodError, ValueError):
    """A matrix that must be invertible is singular."""


class UnsupportedError(ZeroprodError, ValueError):
    """Parameters outside the supported range (char 2, field too small, n=1 where excluded)."""


class NotPreserverError(ZeroprodError):
    """The input map (or subspace) lacks the property a procedure requires.

    ``verdict`` carries the failing :class:`~zeroprod.verify.Verdict` when one
    is available, so callers can report a checkable witness.
    """

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class VerificationError(ZeroprodError):
    """A certificate failed its own post-hoc check.

    Every structural step is re-checked numerically; reaching this means
    either a bug or an input that violated an unchecked precondition.
    """


class InconclusiveError(ZeroprodError):
    """A search could not certify its answer within budget."""


class PreconditionError(ZeroprodError, ValueError):
    """An operation was called on input that violates its stated precondition."""
