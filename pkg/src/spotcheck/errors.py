"""Exception types shared across the package."""


class SpotCheckError(Exception):
    """Base class for all errors raised by spotcheck."""


class InvalidProbability(SpotCheckError, ValueError):
    """A probability argument fell outside [0, 1]."""


class DegenerateConditioning(SpotCheckError, ZeroDivisionError):
    """Conditioning on an event of probability zero."""


class DegenerateModel(SpotCheckError, ValueError):
    """The signal model is too degenerate for the requested construction."""


class DimensionError(SpotCheckError, ValueError):
    """A policy, profile or model has the wrong number of students."""


class TooLarge(SpotCheckError, ValueError):
    """An exact enumeration was requested beyond its size cap."""


class NotApplicable(SpotCheckError, ValueError):
    """Preconditions of an analytic bound do not hold."""


class SolverError(SpotCheckError, RuntimeError):
    """The simplex solver broke down numerically."""
