"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError (and subclasses) exit
with 2, ScaleError (and subclasses) with 3.
"""


class PerfectgenError(Exception):
    """Base class for package-specific errors."""


class ValidationError(PerfectgenError, ValueError):
    """Input violates a documented precondition or format."""


class ArrangementMismatchError(ValidationError):
    """An Arrangement fails its invariants against the graph it is paired with."""


class Graph6ParseError(ValidationError):
    """Malformed graph6 input; the message names the offending byte offset."""


class ScaleError(PerfectgenError, ValueError):
    """Input exceeds the documented scale of an exact oracle."""


class CliqueCapError(ScaleError):
    """Maximal-clique enumeration exceeded its configured cap."""
