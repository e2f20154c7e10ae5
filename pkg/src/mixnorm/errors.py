class MixnormError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MixnormError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonConvergenceError(MixnormError, RuntimeError):
    """A numerical procedure hit its cap before meeting the tolerance.

    The best value reached so far is kept on ``best`` so callers can still
    report it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DivergenceError(MixnormError, ArithmeticError):
    """The requested quantity is infinite (the function is not in the space)."""
