"""Exception types raised across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class HorizonError(DomainError):
    """A Minkowski event lies on or beyond the Rindler horizon."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, err_estimate=None, evaluations=None):
        super().__init__(message)
        self.err_estimate = err_estimate
        self.evaluations = evaluations


class DegenerateStateError(ValueError):
    """All emission amplitudes vanish, so no normalisable state exists."""


class BracketError(RuntimeError):
    """The tuning bracket does not contain a single entropy peak."""

    def __init__(self, message, scan=None):
        super().__init__(message)
        self.scan = scan
