"""Exception types raised by the library.

Everything derives from ``SpCauchyError`` (itself a ``ValueError``) so callers
can catch the whole family with one clause.
"""


class SpCauchyError(ValueError):
    """Base class for all library errors."""


class ZeroVector(SpCauchyError):
    """A vector with (numerically) zero norm cannot be normalized."""


class InvalidDimension(SpCauchyError):
    """Ambient dimension must be an integer >= 2."""


class DimensionMismatch(SpCauchyError):
    """Operands live in different ambient dimensions."""


class InvalidConcentration(SpCauchyError):
    """Concentration rho must satisfy 0 <= rho < 1 (strict upper bound)."""


class AntipodalEndpoints(SpCauchyError):
    """Great-circle interpolation between antipodes is not unique."""


class AtPole(SpCauchyError):
    """Stereographic projection is undefined at the projection pole."""


class InvalidZ(SpCauchyError):
    """The reparameterized argument z must lie in [0, 1)."""


class UnsupportedDimension(SpCauchyError):
    """Closed forms exist only for d in {2, 3, 4, 5}."""


class NodeCountTooSmall(SpCauchyError):
    """Quadrature needs at least 8 nodes."""


class NonPositiveArgument(SpCauchyError):
    """Digamma is only evaluated for strictly positive arguments."""


class InvalidKappa(SpCauchyError):
    """vMF concentration kappa must be strictly positive."""


class MaxDepthExceeded(SpCauchyError):
    """Adaptive integration did not converge within the recursion budget."""


class ReferenceDisagreement(SpCauchyError):
    """Reference quadrature and the long series disagree beyond tolerance."""
