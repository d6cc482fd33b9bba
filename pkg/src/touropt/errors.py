"""Exception types shared across the package.

The CLI maps these onto exit codes (config -> 2, data -> 3, numeric -> 4);
library callers can catch them individually.
"""


class TouroptError(Exception):
    """Base class for package errors."""


class ConfigError(TouroptError):
    """Invalid or inconsistent configuration (bad bounds, missing sections)."""


class DataError(TouroptError):
    """Problem with input data (missing years, bad CSV, impossible series)."""


class EvaluationError(TouroptError):
    """Numeric failure during model evaluation (NaN objective, zero variance)."""
