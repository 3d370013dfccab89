"""Exception hierarchy shared by the solver modules and the CLI."""

from __future__ import annotations


class HaarBurgersError(Exception):
    """Base class for all package errors."""


class ConfigError(HaarBurgersError, ValueError):
    """Invalid parameter, index, range or run-file content."""


class NoExactSolutionError(HaarBurgersError):
    """Raised when a closed-form solution is requested for a problem without one."""


class NumericalError(HaarBurgersError, ArithmeticError):
    """Base class for failures during time stepping."""


class DivergenceError(NumericalError):
    """Non-finite values appeared in the solution.

    Attributes:
        step: 1-based index of the offending time step (0 for the initial state).
        t: time level at which the failure was detected.
    """

    def __init__(self, message: str, step: int | None = None, t: float | None = None):
        super().__init__(message)
        self.step = step
        self.t = t


class SingularSystemError(NumericalError):
    """Collocation system is numerically singular."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class CannotCertifyError(NumericalError):
    """Oracle refinement failed to reach the requested accuracy."""
