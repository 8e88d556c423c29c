"""Exception types shared by the numerics modules."""


class ParameterError(ValueError):
    """A physical or numerical parameter is out of its admissible range."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class DomainError(ValueError):
    """A function was evaluated outside its domain of definition."""


class BranchError(ValueError):
    """Real-root formula requested for a wavenumber on the complex branch."""


class ShapeError(ValueError):
    """Two profiles do not share the same (t, r) sample set."""


class AccuracyError(ArithmeticError):
    """Quadrature or series did not reach the requested tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is still usable.
    """

    def __init__(self, message, value=float("nan"), est_error=float("inf")):
        super().__init__(message)
        self.value = value
        self.est_error = est_error


class InstabilityError(ArithmeticError):
    """An explicit time march blew up (NaN/overflow or runaway growth)."""

    def __init__(self, message, step=None, diagnostics=None):
        super().__init__(message)
        self.step = step
        self.diagnostics = diagnostics or {}
