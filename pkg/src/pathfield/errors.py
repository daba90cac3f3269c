"""Exception types shared across the package."""


class CausalityError(ValueError):
    """A path segment is spacelike where a timelike/null one is required."""


class StabilityError(ValueError):
    """A time step violates the stability bound of an explicit scheme."""


class GaugeError(ValueError):
    """A potential fails a gauge condition required by the requested check."""


class NumericalError(RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""
