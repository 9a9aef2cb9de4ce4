"""Exception hierarchy shared by all hotgate sub-packages.

Configuration problems derive from ``ValueError`` and numeric failures from
``ArithmeticError`` so callers can catch either family without importing
hotgate. The command line maps them to exit codes 2 and 3.
"""
from typing import Optional


class HotgateError(Exception):
    """Base class for all hotgate errors."""


class ConfigError(HotgateError, ValueError):
    """Invalid configuration, arguments or preset parameters."""

    def __init__(
        self,
        message: str,
        key: Optional[str] = None,
        line: Optional[int] = None,
    ):
        self.key = key
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(HotgateError, ArithmeticError):
    """A numeric computation could not produce a valid result."""


class DomainError(NumericError):
    """Coupling evaluated at (near) coincident positions."""


class SizeError(NumericError):
    """An enumeration, grid or Hilbert-space dimension exceeds its cap."""


class OptimizationError(NumericError):
    """The objective returned a non-finite value during optimisation."""


class ConvergenceError(NumericError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class ChannelValidationError(NumericError, ValueError):
    """A Choi matrix is not Hermitian, not normalised or not completely positive."""
