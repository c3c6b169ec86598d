"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad input: non-Hermitian matrix, unnormalized state, malformed grid."""


class ConvergenceError(RuntimeError):
    """An iterative routine failed to reach its tolerance."""


class FitError(ConvergenceError):
    """Lorentzian fit did not converge; ``best`` holds the last parameters."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
