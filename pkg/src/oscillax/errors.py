"""Shared exception types.

Every error condition surfaced by the public API is an OscillaxError
subclass so callers can catch the package's failures uniformly.
"""


class OscillaxError(Exception):
    """Base class for all package-specific errors."""


class PoleError(OscillaxError):
    """Evaluation requested at (or too close to) a pole."""


class DomainError(OscillaxError):
    """Argument outside the documented domain of an operation."""


class NonConvergenceError(OscillaxError):
    """Adaptive refinement exhausted its budget before reaching tolerance."""


class StationaryPointError(OscillaxError):
    """Stationary-point location or classification failed."""


class TruncationError(OscillaxError):
    """A truncated contour or tail still carries non-negligible mass."""


class SchemaError(OscillaxError):
    """An input file does not match its documented schema."""


class InvariantError(OscillaxError):
    """Loaded or computed data violates a structural invariant."""


class TailBudgetError(OscillaxError):
    """A certified tail bound exceeds the requested tolerance."""


class CalibrationError(OscillaxError):
    """A calibration constant fell outside its admissible band."""


class RegimeError(OscillaxError):
    """Parameters violate the asymptotic regime an operation requires."""


class ConfigError(OscillaxError):
    """Invalid CLI or run configuration."""
