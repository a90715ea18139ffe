"""Exception types raised by the library."""


class ScatterError(Exception):
    """Base class for library errors."""


class DomainError(ScatterError, ValueError):
    """An input lies outside the domain of the operation."""


class PoleError(ScatterError, ArithmeticError):
    """Evaluation hit a pole (a vanishing denominator)."""


class NumericError(ScatterError, ArithmeticError):
    """A numerical procedure failed (overflow, non-finite result)."""


class UnsupportedRegion(DomainError):
    """The requested region of the exponent octant has no resonance theory."""
