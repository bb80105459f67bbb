"""Exception types shared across the package."""


class ConefixError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(ConefixError, ValueError):
    """A vector or point does not match the expected dimension."""


class ParameterError(ConefixError, ValueError):
    """A contraction-condition parameter lies outside its admissible range."""


class DomainError(ConefixError, ValueError):
    """A point is outside the domain a map or space is defined on."""


class PreimageError(ConefixError, RuntimeError):
    """No T-preimage could be produced for a requested value.

    Carries the value whose preimage failed, so callers can report the
    concrete point at which the range inclusion S(M) within T(M) broke.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class ScenarioError(ConefixError, ValueError):
    """A scenario file failed to parse or validate.

    The message names the offending field.
    """
