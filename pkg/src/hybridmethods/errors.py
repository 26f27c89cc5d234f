"""Exception types shared across the engine."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine-raised errors."""


class ParseError(EngineError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class IngestionError(EngineError):
    """Structurally valid input that violates an ingestion contract."""


class ConfigurationError(EngineError):
    """Missing or inconsistent policy/mapping configuration."""


class UnknownVariableError(EngineError):
    """A filter or analysis referenced a variable the table does not carry."""


class UnknownItemError(EngineError):
    """An item id that is not part of the catalog or matrix."""


class DegenerateTableError(EngineError):
    """A contingency table unfit for testing (zero marginal or empty)."""


class DegenerateSubsetError(EngineError):
    """A projection or frame subset with no rows to analyze."""


class SessionError(EngineError):
    """Base class for construction-session violations."""


class UnknownSessionError(SessionError):
    pass


class IneligiblePracticeError(SessionError):
    """Attempt to add a practice that is unknown, already chosen or below threshold."""


class NotChosenError(SessionError):
    """Attempt to remove a practice that is not currently chosen."""
