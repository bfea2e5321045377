"""Exceptions raised by hibicone computations.

Each exception class fixes the process exit status of the command line;
each instance carries the severity it is reported with and, when known,
the object it concerns (a poset file, an edge, a character).
"""
from enum import Enum
from typing import ClassVar, Self


class ErrorSeverity(str, Enum):
    """How much of the requested output survives the error."""

    # nothing was written
    ERROR = "error"
    # a partial document was written
    WARNING = "warning"
    # the document is complete; the error only annotates it
    INFO = "info"


class HibiError(Exception):
    """
    Failure of a hibicone request.

    Attributes:
        message: What went wrong
        subject: The poset file, edge or character at fault, if any
        severity: Reporting level at the command-line boundary
        exit_code: Process exit status for this kind of failure
    """

    exit_code: ClassVar[int] = 1

    def __init__(
        self,
        message: str,
        subject: object | None = None,
        severity: ErrorSeverity = ErrorSeverity.ERROR,
    ) -> None:
        self.message = message
        self.subject = subject
        self.severity = severity
        super().__init__(message)

    def __str__(self) -> str:
        if self.subject is None:
            return self.message
        return f"{self.subject}: {self.message}"

    @classmethod
    def partial(cls, message: str, subject: object | None = None) -> Self:
        """An error reported after a truncated document was written."""
        return cls(message, subject, ErrorSeverity.WARNING)

    @classmethod
    def remark(cls, message: str, subject: object | None = None) -> Self:
        """An error that leaves the document complete."""
        return cls(message, subject, ErrorSeverity.INFO)


class DimensionMismatchError(HibiError):
    """Exception raised when vector or matrix shapes do not fit together."""

    pass


class PosetParseError(HibiError):
    """Exception raised when a poset document is malformed or invalid."""

    exit_code = 2


class SpanningTreeError(HibiError):
    """Exception raised when an edge set is not a spanning tree of the Hasse diagram."""

    exit_code = 2


class ConfigError(HibiError):
    """Exception raised when configuration values or flag combinations are invalid."""

    exit_code = 2


class InfeasibleRequestError(HibiError):
    """Exception raised when a well-formed request cannot be carried out."""

    exit_code = 3


class NotGorensteinError(InfeasibleRequestError):
    """Exception raised when an NCCR operation receives a non-Gorenstein Segre product."""

    pass


class NotAdmissibleError(InfeasibleRequestError):
    """Exception raised when a one-parameter subgroup or character is not admissible."""

    pass


class CapExceededError(HibiError):
    """Exception raised when a graph search stops at its vertex cap."""

    exit_code = 4


class GeometryError(HibiError):
    """Exception raised when polytope computations receive unusable input."""

    pass


class DegenerateCellError(GeometryError):
    """Exception raised when a conic cell has zero volume."""

    pass


class UnboundedPolytopeError(GeometryError):
    """Exception raised when an H-representation does not describe a bounded polytope."""

    pass


class MutationConflictError(HibiError):
    """Exception raised when mutation results contradict each other."""

    pass


class CheckFailedError(HibiError):
    """Exception raised when a property check finds a violation."""

    exit_code = 1
