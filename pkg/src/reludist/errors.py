"""Exception types shared across the package."""


class ReludistError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(ReludistError):
    pass


class ZeroVector(ReludistError):
    pass


class DomainError(ReludistError):
    """Argument outside its mathematical domain beyond rounding tolerance."""


class SizeOverflow(ReludistError):
    """Requested layer exceeds the element cap."""


class AllTrialsDegenerate(ReludistError):
    """Every Monte Carlo trial produced a zero output vector."""


class HypothesesTooClose(ReludistError):
    """The two distance claims cannot be separated at the requested budget."""

    def __init__(self, message: str, required_trials: int | None = None):
        super().__init__(message)
        self.required_trials = required_trials


class TooFewPoints(ReludistError):
    pass


class InfeasibleGeometry(ReludistError):
    """Class-center placement failed under the angular constraints."""


class UsageError(ReludistError):
    """Bad command-line arguments (maps to exit code 1)."""
