"""Exception types shared across the package."""


class CkpError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CkpError):
    """Input data violates a structural rule (bad sign, bad shape, bad reference)."""


class FormatError(CkpError):
    """A text file does not conform to the expected line format."""


class PreconditionError(CkpError):
    """An operation's mathematical precondition does not hold.

    ``witness`` optionally carries the object that proves the failure
    (e.g. a feasible point violating an inequality that was assumed valid).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceLimitError(CkpError):
    """An enumeration or search would exceed the configured limit.

    ``estimate`` carries the size that tripped the guard.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
