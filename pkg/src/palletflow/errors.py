"""Exception taxonomy shared across the package."""


class PalletflowError(Exception):
    """Base class for all package errors."""


class ConfigError(PalletflowError):
    """Invalid configuration; message names the offending field."""


class ActionError(PalletflowError):
    """A dispatch action outside the legal action space."""


class UsageError(PalletflowError):
    """API called out of protocol (stale event, advance past end, ...)."""


class DatasetError(PalletflowError):
    """Malformed dataset file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class WeightFormatError(PalletflowError):
    """Malformed or inconsistent weight container file."""
