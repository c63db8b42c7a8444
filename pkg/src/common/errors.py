"""
Exception hierarchy shared by every transit_access module.

Input problems carry the offending file and 1-based row number (the header is
row 1) so the CLI can print ``path:row: problem`` diagnostics.
"""

from typing import Optional


class TransitAccessError(Exception):
    """Base class for all errors raised by transit_access."""


# ==============================================================================
# Input validation
# ==============================================================================
class InputError(TransitAccessError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None, row: Optional[int] = None):
        self.message = message
        self.path = path
        self.row = row
        super().__init__(self.__str__())

    def __str__(self) -> str:
        if self.path is not None and self.row is not None:
            return f"{self.path}:{self.row}: {self.message}"
        if self.path is not None:
            return f"{self.path}: {self.message}"
        return self.message


class MissingColumn(InputError):
    pass


class DuplicateId(InputError):
    pass


class EmptyLineSet(InputError):
    pass


class BadRegion(InputError):
    pass


class BadValue(InputError):
    pass


class UnknownStationRef(InputError):
    pass


class LineNotServed(InputError):
    pass


class NonMonotoneSequence(InputError):
    pass


class BranchTooShort(InputError):
    pass


class RepeatedStation(InputError):
    pass


class DuplicateRecord(InputError):
    pass


class BadMode(InputError):
    pass


class NegativeCount(InputError):
    pass


class WorkersExceedTotal(NegativeCount):
    pass


# ==============================================================================
# Graph container
# ==============================================================================
class GraphError(TransitAccessError, ValueError):
    pass


class SelfLoop(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


class TooSmall(GraphError):
    pass


class FrozenGraph(GraphError):
    pass


# ==============================================================================
# Construction and analysis
# ==============================================================================
class ConstructionError(TransitAccessError, ValueError):
    pass


class EmptyAccessibleSet(ConstructionError):
    pass


class AnalysisError(TransitAccessError, ValueError):
    pass


class InsufficientSupport(AnalysisError):
    pass


class InsufficientData(AnalysisError):
    pass


class ZeroVariance(AnalysisError):
    pass


class UnknownField(AnalysisError):
    pass


class InvariantViolation(TransitAccessError, AssertionError):
    """An internal consistency check failed; this is a bug, not bad input."""
