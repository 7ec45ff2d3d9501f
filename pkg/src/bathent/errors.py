"""Exception hierarchy shared across the package."""


class BathentError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(BathentError):
    """Invalid physical configuration (bad value, unknown key, wrong shape)."""


class GeometryError(ConfigurationError):
    """Invalid oscillator arrangement."""


class DomainError(BathentError):
    """Argument outside the mathematical domain of a function."""


class OverflowDomainError(DomainError):
    """Argument in a region where the result cannot be represented."""


class ValidityError(ConfigurationError):
    """Parameters outside the validity regime of a closed-form result."""


class SingularityError(BathentError):
    """Dynamical matrix is singular at the requested frequency."""

    def __init__(self, omega, message=None):
        self.omega = omega
        super().__init__(message or f"response matrix singular at omega={omega}")


class QuadratureError(BathentError):
    """Frequency integration failed to converge within the subdivision budget."""

    def __init__(self, message, worst_interval=None, error_estimate=None):
        self.worst_interval = worst_interval
        self.error_estimate = error_estimate
        super().__init__(message)


class PhysicsError(BathentError):
    """A physical invariant (uncertainty relation, noise positivity) is violated.

    Signals an inconsistency upstream rather than a user mistake.
    """
