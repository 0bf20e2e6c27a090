"""Semantic exception hierarchy for the package.

Public functions raise these instead of bare ValueError so that callers
(and the CLI) can map failures to exit codes without string matching.
"""


class RiskModelError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(RiskModelError, ValueError):
    """A vector does not match the atom count of its probability space."""


class DomainError(RiskModelError, ValueError):
    """A scalar parameter lies outside its admissible domain."""


class ValidationError(RiskModelError, ValueError):
    """A composite object (space, spectrum, density, table, ...) is invalid."""


class UnboundedError(RiskModelError, ArithmeticError):
    """A one-dimensional search ran past the bracket cap.

    ``side`` records whether the cap was hit while expanding upward
    ("above") or downward ("below").
    """

    def __init__(self, message: str, side: str = "above"):
        super().__init__(message)
        self.side = side


class InfeasibleError(RiskModelError, ArithmeticError):
    """A threshold problem has no solution within the bracket cap."""


class InvalidLossError(RiskModelError, ValueError):
    """A loss function violated its declared monotonicity on sampled points."""
