"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class IntegrationError(RuntimeError):
    """Adaptive integration exhausted its evaluation budget."""


class ConvergenceError(RuntimeError):
    """An iterative numerical routine failed to converge."""


class VerificationError(RuntimeError):
    """A constructed object failed its post-construction measurement."""

    def __init__(self, message, measurement=None):
        super().__init__(message)
        self.measurement = measurement
