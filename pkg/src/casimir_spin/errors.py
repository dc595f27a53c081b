"""Exception hierarchy shared by every module."""


class CasimirSpinError(Exception):
    """Base class for all errors raised by the package."""


class PhysicsDomainError(CasimirSpinError, ValueError):
    """Inputs violate a physical precondition (negative axis, r = 0, ...)."""


class QuadratureError(CasimirSpinError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ResonanceError(PhysicsDomainError):
    """The polarizability denominator vanishes for one principal axis."""

    def __init__(self, message, axis):
        super().__init__(message)
        self.axis = axis


class ShapeError(PhysicsDomainError):
    """A tensor that should be axisymmetric is not."""


class SingularityError(PhysicsDomainError):
    """Field evaluated at the dipole position."""


class ConsistencyError(CasimirSpinError, RuntimeError):
    """Two independent routes to the same quantity disagree.

    This signals a conventions bug in the library, not a user error.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConfigError(CasimirSpinError, ValueError):
    """Malformed run configuration."""
