"""Exception types shared by every module."""


class InvalidArgument(ValueError):
    """Input violates a documented precondition (shape, order, plan)."""


class UnsupportedSize(ValueError):
    """Input is well formed but too large for a brute-force routine."""


class NumericalFailure(ArithmeticError):
    """An iterative kernel failed to converge or a matrix is numerically singular."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
