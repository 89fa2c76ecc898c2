"""Exception hierarchy for ccsketch.

Every error raised by the library derives from :class:`CCSketchError`, so
callers can catch one base class.  Math-domain problems additionally derive
from ``ValueError`` to stay friendly to generic numeric code.
"""


class CCSketchError(Exception):
    """Base class for all ccsketch errors."""


class DomainError(CCSketchError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DivergentMomentError(DomainError):
    """The requested moment of the stable law does not exist (is infinite)."""


class ConfigError(CCSketchError, ValueError):
    """A sketch configuration violates its invariants."""


class UpdateError(CCSketchError, ValueError):
    """A stream update cannot be applied (e.g. index out of range)."""


class MergeError(CCSketchError, ValueError):
    """Two sketches with incompatible configurations cannot be merged."""


class DegenerateSketchError(CCSketchError, ValueError):
    """A sketch coordinate is exactly zero (or non-positive where positive
    support is required).  Under the projection model this is a
    probability-zero event, so it signals an unused or corrupted sketch."""


class SolverError(CCSketchError, RuntimeError):
    """The one-dimensional minimizer failed to bracket a minimum."""


class DecodeError(CCSketchError, ValueError):
    """A serialized sketch payload is corrupt, truncated, or has an
    unsupported version."""


class ParseError(CCSketchError, ValueError):
    """A text stream file contains a malformed line."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number
