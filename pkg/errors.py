"""
Workbench Errors
Every failure the workbench reports, with a stable code and CLI exit code
"""
from typing import Any, Dict, Optional


class WorkbenchError(Exception):
    """Base class for all domain errors"""

    exit_code = 2

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message, "details": self.details}


class CapExceeded(WorkbenchError):
    """An operation would exceed a configured size cap"""

    exit_code = 3


class DimCapExceeded(CapExceeded):
    pass


class EnumerationCapExceeded(CapExceeded):
    pass


# fpalgebra

class NotPrime(WorkbenchError):
    pass


class InvalidStructureConstants(WorkbenchError):
    pass


class NotCommutative(WorkbenchError):
    pass


class NotAssociative(WorkbenchError):
    pass


class BadUnit(WorkbenchError):
    pass


class FieldMismatch(WorkbenchError):
    pass


class SourceMismatch(WorkbenchError):
    pass


class NotHomomorphism(WorkbenchError):
    pass


class NotMonic(WorkbenchError):
    pass


class ZeroDegree(WorkbenchError):
    pass


# pearl / spectrum

class InternalClosureFailure(WorkbenchError):
    pass


class NotPBoolean(WorkbenchError):
    pass


class NotInjectiveInput(WorkbenchError):
    pass


class SystemValidationFailure(WorkbenchError):
    pass


class NotIdempotent(WorkbenchError):
    pass


class NotSquarefree(WorkbenchError):
    pass


# duality

class InvalidSetMap(WorkbenchError):
    pass


class ScalarResolutionFailure(WorkbenchError):
    pass


class NoPreimagePoint(WorkbenchError):
    pass


# profinite

class InvalidTower(WorkbenchError):
    pass


class LevelOutOfRange(WorkbenchError):
    pass


class InvalidSubtower(WorkbenchError):
    pass


class InvalidAtDepth(WorkbenchError):
    pass


class NotClopenAtThisDepth(WorkbenchError):
    pass


class NaturalityFailure(WorkbenchError):
    pass


# sheafmod

class InvalidModule(WorkbenchError):
    pass


class AlgebraMismatch(WorkbenchError):
    pass


# cli

class ExprSyntaxError(WorkbenchError):
    """Parse failure with the byte offset and the set of expected tokens"""

    exit_code = 1

    def __init__(self, offset: int, expected, found: str = ""):
        expected = sorted(set(expected))
        shown = found if found else "end of input"
        super().__init__(
            f"syntax error at byte {offset}: expected one of {', '.join(expected)}; found {shown!r}",
            {"offset": offset, "expected": expected, "found": found},
        )
        self.offset = offset
        self.expected = expected


class MixedCharacteristic(WorkbenchError):
    exit_code = 1


class InvalidInput(WorkbenchError):
    """A command argument is malformed or names something unknown"""

    exit_code = 1
