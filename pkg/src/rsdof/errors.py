"""Exception types raised across the package."""


class RsdofError(Exception):
    """Base class for all package errors."""


class EmptyProfileError(RsdofError, ValueError):
    pass


class DimensionError(RsdofError, ValueError):
    pass


class OutsideRegionError(RsdofError, ValueError):
    """A tuple was required to lie in the DoF region (or on a facet) but does not."""

    def __init__(self, message, violated=()):
        super().__init__(message)
        self.violated = tuple(violated)


class InvalidSchemeError(RsdofError, ValueError):
    pass


class GuardExceededError(RsdofError):
    pass


class SimulationError(RsdofError, RuntimeError):
    pass
