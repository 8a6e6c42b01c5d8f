"""Exception hierarchy shared by all modules."""


class ValsepError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(ValsepError, ValueError):
    """An operation was called with arguments outside its contract."""


class VariantMismatch(ValsepError, TypeError):
    """Opens or valuations from different spaces were combined."""


class UnboundedRestriction(ValsepError, ArithmeticError):
    """A restriction needed to subtract an infinite value."""


class SizeLimitExceeded(PreconditionError):
    pass


class NotIrreducible(PreconditionError):
    pass


class VerificationFailed(ValsepError):
    """A computed result failed its own postcondition check.

    ``witness`` holds the open (or other object) on which the check failed.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvariantViolation(ValsepError):
    """Internal consistency check failed; indicates a corrupted valuation."""
