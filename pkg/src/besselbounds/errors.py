"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the admissible region of an operation.

    The message always names the violated constraint, e.g. ``"nu > -1/2"``.
    """


class ConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its tolerance within its cap."""
