class OSTError(ValueError):
    """Base class for validation failures raised by this package."""


class DimensionError(OSTError):
    pass


class DegenerateColumnError(OSTError):
    pass


class ValidationError(OSTError):
    pass


class ZeroThresholdError(OSTError):
    pass


class HypothesisError(OSTError):
    """A stated precondition of a bound does not hold."""


class GuardError(OSTError):
    """Exhaustive search would exceed its size guard."""
