class ParameterError(ValueError):
    """Invalid argument or configuration value."""


class NumericalError(ArithmeticError):
    """A factorization or solve failed even after regularization."""
