"""Exception hierarchy for the hypergraph store and its engines."""

from typing import List, Optional, Sequence


class ATCHError(Exception):
    """Base exception for every engine failure."""

    code = "ATCHError"
    exit_code = 2

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class UsageError(ATCHError):
    """Malformed input: bad flags, unparsable log lines, DSL syntax errors."""

    code = "UsageError"
    exit_code = 1


class DomainError(ATCHError):
    """Well-formed input that violates a model rule."""

    code = "DomainError"
    exit_code = 2


# Usage errors

class ParseError(UsageError):
    code = "ParseError"

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message, line=line)
        self.line = line


class QuerySyntaxError(UsageError):
    code = "SyntaxError"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}", line=line, column=column)
        self.line = line
        self.column = column


class ConfigError(UsageError):
    code = "ConfigError"


class FixtureMissing(UsageError):
    code = "FixtureMissing"


# Domain errors raised by model construction and validation

class ValidationFailed(DomainError):
    """Raised with the complete list of violations, not just the first."""

    code = "ValidationFailed"

    def __init__(self, message: str = "", violations: Sequence["object"] = ()):
        self.violations: List[object] = list(violations)
        if not message:
            message = "; ".join(str(v) for v in self.violations) or "validation failed"
        super().__init__(message)


class EmptyParticipants(ValidationFailed):
    code = "EmptyParticipants"


class UnresolvedRef(ValidationFailed):
    code = "UnresolvedRef"


class ConfidenceOutOfRange(ValidationFailed):
    code = "ConfidenceOutOfRange"


class MalformedInterval(ValidationFailed):
    code = "MalformedInterval"


# Store errors

class CausalCycle(DomainError):
    code = "CausalCycle"


class DuplicateId(DomainError):
    code = "DuplicateId"


class UnknownEdge(DomainError):
    code = "UnknownEdge"


class EndBeforeStart(DomainError):
    code = "EndBeforeStart"


class SeqOutOfRange(DomainError):
    code = "SeqOutOfRange"


# Engine errors

class EmptyPathSet(DomainError):
    code = "EmptyPathSet"


class DepthDomainError(DomainError):
    code = "DomainError"


class ThresholdDomainError(DomainError):
    """A confidence threshold outside its open unit interval."""

    code = "DomainError"


class EmptyObservations(DomainError):
    code = "EmptyObservations"


class NoAttributes(DomainError):
    code = "NoAttributes"


class ZeroGain(DomainError):
    code = "ZeroGain"


class NotInConflict(DomainError):
    code = "NotInConflict"


class CyclicPattern(DomainError):
    code = "CyclicPattern"


class UnknownConstant(DomainError):
    code = "UnknownConstant"


class TooLarge(DomainError):
    code = "TooLarge"


# Maps a violation code to the exception raised when a constructor rejects input.
VIOLATION_ERRORS = {
    EmptyParticipants.code: EmptyParticipants,
    UnresolvedRef.code: UnresolvedRef,
    ConfidenceOutOfRange.code: ConfidenceOutOfRange,
    MalformedInterval.code: MalformedInterval,
    UnknownEdge.code: UnknownEdge,
    CausalCycle.code: CausalCycle,
}
