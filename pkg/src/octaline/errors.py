"""Exception types shared across the package."""


class OctalineError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(OctalineError, ValueError):
    """Operands have incompatible matrix sizes."""


class RankError(OctalineError, ValueError):
    """A homogeneous frame is rank deficient."""


class SingularMatrixError(OctalineError, ArithmeticError):
    """Matrix failed the singular-value invertibility test."""


class ConfigurationError(OctalineError, ValueError):
    """Inconsistent parameters (zero coefficients, kappa mismatch, bad config)."""


class NotInChartError(OctalineError, ArithmeticError):
    """The point has no finite coordinate in the requested affine chart."""


class NotTransversalError(OctalineError, ValueError):
    """A required direct-sum decomposition does not exist."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class CayleyPoleError(OctalineError, ArithmeticError):
    """1 is in the spectrum of the unitary argument; the preimage lies at infinity."""


class IntegrationError(OctalineError, RuntimeError):
    """Numerical integration left the unitary manifold faster than allowed."""


class GroupClosureError(OctalineError, RuntimeError):
    """Group generation failed to close; signals a convention bug upstream."""
