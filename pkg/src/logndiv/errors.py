"""Exception hierarchy. All library errors derive from LogndivError so the
CLI can map them to stable exit codes (domain/validity -> 3)."""


class LogndivError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LogndivError, ValueError):
    """Input outside the mathematical domain of an operation."""


class BelowAsymptoticRegimeError(DomainError):
    """High-SNR approximation requested below its validity region.

    Carries the smallest average received power (watts) for which the
    requested approximation is defined, so sweeps can annotate instead
    of aborting.
    """

    def __init__(self, message: str, min_er_watts: float):
        super().__init__(message)
        self.min_er_watts = min_er_watts


class DegenerateGeometryError(DomainError):
    """Fully correlated channels (a = 1): the osculating hypersphere of the
    EGC/MRC outage region degenerates; treat as a single branch instead."""


class SeriesCapError(LogndivError):
    """A series evaluation hit its hard iteration cap before converging."""


class IntegrationFailureError(LogndivError):
    """Adaptive quadrature could not reach the requested tolerance.

    The best estimate and its error bound are attached for diagnostics.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class SearchFailureError(LogndivError):
    """Constrained numerical search found no feasible/converged point."""
