"""Shared exception types."""


class CarpetGapsError(Exception):
    """Base class for all library errors."""


class DigitSetError(CarpetGapsError):
    """Invalid digit-set description (syntax, range, or cardinality)."""


class CapExceededError(CarpetGapsError):
    """A resource cap (cell count, component count, level) would be exceeded."""

    def __init__(self, message: str, *, requested: int | None = None,
                 cap: int | None = None):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class TooFewTightSamplesError(CarpetGapsError):
    """Exponent fit requested with fewer than three tight bracket samples."""
