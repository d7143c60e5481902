"""Exception types shared across the package."""


class ChpError(Exception):
    """Base class for all package errors."""


class NotMultipleOfSix(ChpError):
    """Raised when a polygon side count is not a positive multiple of six."""


class NoSolution(ChpError):
    """Raised when the border chain solver fails to converge."""


class InconsistentDna(ChpError):
    """Raised when a direction sequence does not match the border multiset."""


class ConstructionFailed(ChpError):
    """Raised when ring assembly cannot complete or fails its closure check."""


class AmbiguousStart(ChpError):
    """Raised when no disk sits at the fundamental vertex within tolerance."""


class NoPath(ChpError):
    """Raised when no contact path of the expected length reaches the center."""


class CapExceeded(ChpError):
    """Raised when an enumeration would produce more items than its cap."""


class PreconditionViolated(ChpError):
    """Raised when a closed-form shortcut is called outside its domain."""


class CoincidentPoints(ChpError):
    """Raised when an energy evaluation meets two coincident centers."""


class NonFinite(ChpError):
    """Raised when a minimization step produces a non-finite value."""


class ShellCountMismatch(ChpError):
    """Raised when a disk count is incompatible with the claimed shell count."""


class NoIntersection(ChpError):
    """Raised when two equal-radius circles do not intersect."""


class Coincident(ChpError):
    """Raised when two circle centers coincide and intersection is undefined."""


class ParseError(ChpError):
    """Raised when a configuration file cannot be parsed."""


class SchemaMismatch(ParseError):
    """Raised when a configuration file declares an unsupported schema."""
