"""Exception hierarchy shared by every module of the package."""


class LOCCError(Exception):
    """Base class for all errors raised by locctransform."""


class InvariantViolation(LOCCError, ValueError):
    """An input object breaks one of its stated invariants."""


class InvalidVector(InvariantViolation):
    """A probability vector is negative or not normalized."""


class InvalidState(InvariantViolation):
    """A pure state has the wrong shape or is not normalized."""


class InvalidParameter(LOCCError, ValueError):
    pass


class DimensionMismatch(LOCCError, ValueError):
    pass


class IndexOutOfRange(LOCCError, IndexError):
    pass


class NotMajorized(LOCCError):
    """The requested transformation violates the majorization condition."""


class NotLocallyEquivalent(LOCCError):
    pass


class NumericalFailure(LOCCError, ArithmeticError):
    """A linear-algebra kernel failed to converge."""


class InvalidProtocol(InvariantViolation):
    """A protocol failed validation; ``report`` holds the details when available."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BranchNotPure(LOCCError):
    pass


class RankTooHigh(LOCCError, ValueError):
    pass


class TooLarge(LOCCError):
    """Enumeration would exceed the configured atom cap."""


class EmptyTypicalSet(LOCCError):
    pass


class ParseError(LOCCError, ValueError):
    pass
