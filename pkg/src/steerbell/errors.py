"""Exception types raised by steerbell.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch one thing.
"""


class SteerBellError(ValueError):
    """Base class for library errors."""


class NotHermitian(SteerBellError):
    pass


class InvalidState(SteerBellError):
    """A matrix failed a density-matrix invariant.

    ``invariant`` is one of ``"hermitian"``, ``"unit trace"``,
    ``"positive semidefinite"``, ``"shape"`` or ``"finite"``.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


class BlochNormExceeded(SteerBellError):
    pass


class ParameterOutOfRange(SteerBellError):
    pass


class TooManySettings(SteerBellError):
    pass


class LengthMismatch(SteerBellError):
    pass


class ProofInvalidMu(SteerBellError):
    pass


class InvalidWeights(SteerBellError):
    pass


class StateFormatError(SteerBellError):
    """State JSON could not be parsed into a 2x2 or 4x4 complex matrix."""
