"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (off-sphere point, non-unit octonion, ...)."""


class DegeneracyError(ArithmeticError):
    """A linear system that should have a one-dimensional solution space does not."""


class ConfigurationError(ValueError):
    """Unknown model kind or incompatible size parameter."""


class DomainError(ValueError):
    """The input lies outside the domain where the operation is defined."""
