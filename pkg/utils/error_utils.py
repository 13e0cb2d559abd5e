"""
Error Handling Utilities Module

This module provides the exception hierarchy of the capillary lab and the
helper the scenario engine uses to log and absorb failures.
"""

import logging
import traceback
from typing import Dict, Any, Optional, Callable, List

logger = logging.getLogger(__name__)

class CapillaryLabError(Exception):
    """Base class of every error raised by the lab."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        """
        Args:
            message: What went wrong
            details: Values locating the problem (input key, node, tolerance, ...)
        """
        super().__init__(message)
        self.message = message
        self.details = dict(details) if details else {}

    def __str__(self):
        if not self.details:
            return self.message
        pairs = ", ".join(f"{key}={value}" for key, value in self.details.items())
        return f"{self.message} ({pairs})"

    def to_dict(self) -> Dict[str, Any]:
        """Reason, details and class name as written into a scenario result."""
        return {"reason": self.message, "details": dict(self.details), "error": self.__class__.__name__}

class ConfigurationError(CapillaryLabError):
    """A scenario file, settings file or command-line override cannot be used."""
    pass

class ArgumentError(CapillaryLabError, ValueError):
    """An argument is outside its documented range."""
    pass

class DomainError(CapillaryLabError, ValueError):
    """A point lies outside a chart, a domain or a profile interval."""
    pass

class DataError(CapillaryLabError, ValueError):
    """Sampled data is unusable (non-finite values, non-positive growth)."""
    pass

class EmptyEvaluationError(DataError):
    """No grid node survives an evaluation mask."""
    pass

class PreconditionError(CapillaryLabError):
    """The hypotheses of a check or construction do not hold."""
    pass

class ConvergenceError(CapillaryLabError):
    """An iteration stopped without converging; keeps its residual history."""

    def __init__(self, message: str, history: Optional[List[float]] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.history = list(history or [])

    def to_dict(self) -> Dict[str, Any]:
        return dict(super().to_dict(), history=list(self.history))

def handle_error(
    error: Exception,
    log_error: bool = True,
    raise_error: bool = False,
    default_return: Any = None,
    error_callback: Optional[Callable[[Exception], None]] = None,
    context: Optional[str] = None
) -> Any:
    """
    Log a caught error and either re-raise it or return a fallback.

    Lab errors are expected outcomes of a run and are logged without a
    traceback; anything else gets its traceback at DEBUG level.

    Args:
        error: Exception caught by the caller
        log_error: Log it at ERROR level
        raise_error: Re-raise after logging
        default_return: Fallback returned when not re-raising
        error_callback: Called with the error before returning
        context: Prefix naming the scenario or operation

    Returns:
        default_return

    Raises:
        The original exception if raise_error is True
    """
    if log_error:
        prefix = f"{context}: " if context else ""
        logger.error(f"{prefix}{error.__class__.__name__}: {error}")
        if not isinstance(error, CapillaryLabError):
            logger.debug(f"Traceback: {traceback.format_exc()}")

    if error_callback:
        try:
            error_callback(error)
        except Exception as callback_error:
            logger.error(f"Error callback failed: {callback_error}")

    if raise_error:
        raise error

    return default_return
