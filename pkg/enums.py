"""Enumerations for Preproj-Verify"""

from enum import Enum, auto


class GradingKind(Enum):
    """Which degree a graded dimension table is indexed by."""
    STAR_DEGREE = "star"
    PATH_LENGTH = "length"


class StopMode(Enum):
    """How far a graded quotient is computed."""
    AUTO = auto()
    MAX_DEGREE = auto()


class DynkinFamily(Enum):
    """Simply-laced Dynkin families."""
    A = "A"
    D = "D"
    E = "E"


class Construction(Enum):
    """The three constructions of the preprojective algebra."""
    CO = "co"
    HO = "ho"
    TE = "te"


class Orientation(Enum):
    """Orientations offered by the built-in quiver generators."""
    LINEAR = "linear"
    ALTERNATING = "alternating"
    INWARD = "inward"
    OUTWARD = "outward"
    STANDARD = "standard"
