"""Exception types raised across the package."""

from __future__ import annotations


class SurzhykError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(SurzhykError):
    """A corpus file could not be read or decoded."""

    def __init__(self, path: str, message: str, offset: int | None = None) -> None:
        self.path = path
        self.offset = offset
        where = f"{path}" if offset is None else f"{path} (byte offset {offset})"
        super().__init__(f"{where}: {message}")


class RuleFileError(SurzhykError):
    """A rule file failed to parse or validate."""

    def __init__(self, message: str, violations: list[str] | None = None) -> None:
        self.violations = list(violations or [])
        super().__init__(message)


class GoldFileError(SurzhykError):
    """A gold-label file is malformed."""

    def __init__(self, message: str, row: int | None = None) -> None:
        self.row = row
        super().__init__(message if row is None else f"row {row}: {message}")


class MatchFileError(SurzhykError):
    """A serialized match file could not be read back."""
