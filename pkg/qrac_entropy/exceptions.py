from typing import Tuple


class QRACError(Exception):
    """Base class for exceptions in this package."""

    pass


class ConfigurationError(QRACError):
    """Exception raised for configuration related errors."""

    pass


class DomainError(QRACError, ValueError):
    """Exception raised when an argument lies outside its admissible range."""

    pass


class InsufficientStatisticsError(QRACError):
    """Exception raised when a transcript has no rounds for some (a, y) cell."""

    def __init__(self, cell: Tuple[int, int]):
        self.cell = cell
        a, y = cell
        super().__init__(f"No rounds recorded for input a={a}, measurement y={y}")
