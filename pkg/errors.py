"""Exception hierarchy for Preproj-Verify"""

from typing import Optional


class PreprojError(Exception):
    """Base class of every error raised by the library."""


class InputError(PreprojError):
    """Bad input: the CLI reports it and exits with code 2."""


class QuiverSyntaxError(InputError):
    """A line of a quiver description could not be parsed."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class QuiverDefinitionError(InputError):
    """Duplicate identifier or dangling arrow endpoint."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownVertexError(InputError):
    pass


class FieldError(InputError):
    """Bad field selection or a literal that is not invertible in the field."""


class QAssignmentError(InputError):
    pass


class NotATreeError(InputError):
    pass


class NotDynkinError(InputError):
    pass


class CyclicQuiverError(InputError):
    pass


class HeightError(InputError):
    """No height function exists (an unbalanced undirected cycle)."""


class NeedsExplicitBoundError(InputError):
    """Automatic stopping was requested where termination is not guaranteed."""


class RelationError(InputError):
    """A relation is zero-length or not homogeneous."""


class ShapeMismatchError(PreprojError):
    pass


class DegreeOutOfRangeError(PreprojError):
    pass


class WindowError(PreprojError):
    """A vertex or degree lies outside a translation-quiver window."""
