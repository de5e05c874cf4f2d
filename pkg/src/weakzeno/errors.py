"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes:
        estimate: best integral estimate at the point of failure.
        error: the associated error bound.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class RootFindingError(ArithmeticError):
    pass


class OdeError(ArithmeticError):
    """The ODE integrator produced a non-finite state."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class StepSizeError(DomainError):
    """Time step too coarse for the fastest scale of the model."""

    def __init__(self, message: str, suggested_dt: float):
        super().__init__(message)
        self.suggested_dt = suggested_dt


class DomainWarning(UserWarning):
    """A result was clamped or computed outside its comfortable domain."""
