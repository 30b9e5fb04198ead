"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class ConsistencyError(ArithmeticError):
    """Raised when a numeric self-check fails (e.g. an imaginary residue
    exceeds tolerance on a quantity that must be real)."""
