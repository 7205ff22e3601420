"""feeclab exceptions and error handling."""

from typing import Any, Optional


class FeecLabError(Exception):
    """Base exception for feeclab."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None) -> None:
        """Initialize feeclab error.

        Args:
        ----
            message: Error message
            details: Additional error details

        """
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ValidationError(FeecLabError):
    """Exception for invalid arguments and configuration values."""

    def __init__(self, field: str, message: str, value: Any = None) -> None:
        """Initialize validation error.

        Args:
        ----
            field: Field name that failed validation
            message: Validation error message
            value: Invalid value

        """
        super().__init__(f"Validation error for {field}: {message}", {"field": field})
        self.field = field
        self.value = value


class ComplexError(FeecLabError):
    """Exception for invalid complexes, levels out of range and dimension mismatches."""


class MorphismError(FeecLabError):
    """Exception for morphisms that do not fit their complexes."""

    def __init__(self, message: str, level: Optional[int] = None) -> None:
        """Initialize morphism error.

        Args:
        ----
            message: Error message
            level: Offending level, if any

        """
        super().__init__(message, {"level": level})
        self.level = level


class SolverError(FeecLabError):
    """Exception for singular systems and impossible eigen requests."""


class NeighborhoodError(FeecLabError):
    """Exception for points outside the tubular neighborhood of a surface."""

    def __init__(self, message: str, distance: Optional[float] = None) -> None:
        """Initialize neighborhood error.

        Args:
        ----
            message: Error message
            distance: Offending signed distance

        """
        super().__init__(message, {"distance": distance})
        self.distance = distance
