"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its requested accuracy."""


class SeriesNotConverged(NumericalError):
    """Thermal series truncated before reaching tolerance.

    Carries the partial sum and the error bound achieved at truncation.
    """

    def __init__(self, message: str, partial: float, err_bound: float):
        super().__init__(message)
        self.partial = partial
        self.err_bound = err_bound


class QuadratureNotConverged(NumericalError):
    """Adaptive quadrature finished with an error estimate above tolerance."""

    def __init__(self, message: str, value: float, err_estimate: float):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class IntegratorFailure(NumericalError):
    """Time integration could not meet the per-step tolerance."""


class GridCoverageError(ValueError):
    """A sampled field configuration does not cover/resolve the required region."""
