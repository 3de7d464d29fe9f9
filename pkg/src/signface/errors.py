"""Error types and diagnostics shared across the package.

Every error carries a stable ``kind`` string plus optional source
position so the CLI and the HTTP server can emit uniform diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass


class SignfaceError(Exception):
    """Base class for all user-facing errors."""

    kind = "Error"

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def as_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "line": self.line, "col": self.col}


class MalformedGrid(SignfaceError):
    kind = "MalformedGrid"


class InvariantViolation(SignfaceError):
    kind = "InvariantViolation"


class MissingUnit(SignfaceError):
    kind = "MissingUnit"


class OutOfRange(SignfaceError):
    kind = "OutOfRange"


class AnnotationSyntaxError(SignfaceError):
    """Grammar-level parse failure. Named to avoid the builtin SyntaxError."""

    kind = "SyntaxError"


class OverlapError(SignfaceError):
    kind = "OverlapError"


class ValueRangeError(SignfaceError):
    """A parsed value is outside its allowed range."""

    kind = "RangeError"


class UnknownPose(SignfaceError):
    kind = "UnknownPose"


class MalformedLexicon(SignfaceError):
    kind = "MalformedLexicon"


class RegionMismatch(SignfaceError):
    """A lexicon pose touches units outside the region its track owns."""

    kind = "RegionMismatch"


class UnknownTrackKind(SignfaceError):
    kind = "UnknownTrackKind"


class MalformedPolicy(SignfaceError):
    kind = "MalformedPolicy"


class MalformedRow(SignfaceError):
    kind = "MalformedRow"


class DuplicateId(SignfaceError):
    kind = "DuplicateId"


class EmptyDataset(SignfaceError):
    kind = "EmptyDataset"


@dataclass(frozen=True)
class Diagnostic:
    """One line of tool output: an error, warning or note tied to a source position."""

    severity: str
    message: str
    kind: str | None = None
    file: str | None = None
    line: int | None = None
    col: int | None = None

    def format(self) -> str:
        where = []
        if self.file is not None:
            where.append(self.file)
        if self.line is not None:
            where.append(str(self.line))
            if self.col is not None:
                where.append(str(self.col))
        prefix = f"{self.severity}: "
        if where:
            prefix += ":".join(where) + ": "
        return prefix + self.message


def diagnostic_from_error(err: SignfaceError, file: str | None = None) -> Diagnostic:
    return Diagnostic(
        severity="error",
        message=err.message,
        kind=err.kind,
        file=file,
        line=err.line,
        col=err.col,
    )
