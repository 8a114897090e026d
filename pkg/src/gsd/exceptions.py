class GSDError(Exception):
    """Base class for errors raised by :mod:`gsd`."""


class DimensionError(GSDError, ValueError):
    """Qubit counts or vector lengths of two operands do not agree."""


class SolverDiverged(GSDError, RuntimeError):
    """No restart of the stationarity solver reached the residual tolerance."""

    def __init__(self, message, best_residual=float("nan")):
        super().__init__(message)
        self.best_residual = best_residual


class UnsupportedArity(GSDError, ValueError):
    """The operation is only defined for a particular number of qubits."""


class NotApplicable(GSDError, ValueError):
    """Preconditions of a bound or formula are not met by the given input."""


class CostGuard(GSDError, ValueError):
    """The requested brute-force search would be too expensive."""


class FormulaSupportWarning(UserWarning):
    """A closed-form expression was evaluated outside the coefficient pattern it assumes."""
