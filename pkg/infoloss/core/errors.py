"""
Exception hierarchy shared by all infoloss modules
"""

from typing import Optional


class InfolossError(Exception):
    """Base class for every error raised by infoloss"""


class NetworkStructureError(InfolossError, ValueError):
    """Malformed layer sizes or connectivity matrices, or an index out of range"""


class NetworkFormatError(NetworkStructureError):
    """
    A network file could not be parsed

    Carries the file path, line number and the offending field (as a
    JSON-path like ``connectivity[0][1][2]``) when they are known.
    """

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.message = message
        self.path = path
        self.line = line
        self.field = field
        super().__init__(str(self))

    def __str__(self) -> str:
        location = []
        if self.path:
            location.append(str(self.path))
        if self.line is not None:
            location.append(f"line {self.line}")
        if self.field:
            location.append(f"field '{self.field}'")
        if location:
            return f"{', '.join(location)}: {self.message}"
        return self.message


class NoInformationError(InfolossError, ValueError):
    """An agent (or the final aggregator) receives no usable estimate"""


class ContractViolation(InfolossError, ValueError):
    """A caller-supplied value breaks an operation's precondition"""


class EnumerationTooLarge(InfolossError, ValueError):
    """Exhaustive enumeration requested beyond the edge-slot guard"""
