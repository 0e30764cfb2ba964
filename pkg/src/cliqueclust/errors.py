"""Exception hierarchy shared by every module."""


class CliqueClustError(Exception):
    """Base class for library errors."""


class InvalidNodeError(CliqueClustError, IndexError):
    """A node id is outside ``0..n-1``."""


class InvalidArgumentError(CliqueClustError, ValueError):
    pass


class DegenerateInputError(CliqueClustError, ValueError):
    """The input is valid but too small or too empty for the quantity requested."""


class NumericalError(CliqueClustError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    """The eigensolver stopped at its iteration cap without converging."""

    def __init__(self, message, iterations, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
