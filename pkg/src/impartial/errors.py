"""Exception types shared across the library."""


class ImpartialError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ImpartialError, ValueError):
    """A mechanism or construction parameter violates a precondition."""


class ApplicabilityError(ParameterError):
    """The requested parameters lie outside the range the guarantee covers."""


class InstanceFormatError(ImpartialError, ValueError):
    """An instance document is malformed or violates a profile invariant."""


class BudgetExceededError(ImpartialError):
    """An exact search ran past its configured node budget."""
