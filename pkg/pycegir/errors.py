from typing import Optional, Tuple


class Error(Exception):
    """Base class for exceptions in this module."""

    def __init__(self, message: str):
        super(Error, self).__init__(message)
        self.message = message


class ParseError(Error):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super(ParseError, self).__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownLocationError(Error):
    def __init__(self, location: str):
        super(UnknownLocationError, self).__init__(f"unknown location {location}")
        self.location = location


class InstrumentationError(Error):
    pass


# Raised by the interpreter on division or modulo by zero.
class EvaluationError(Error):
    def __init__(
        self,
        message: str,
        location: Optional[str] = None,
        position: Optional[Tuple[int, int]] = None,
    ):
        super(EvaluationError, self).__init__(message)
        self.location = location
        self.position = position


class BudgetError(Error):
    pass


class InvalidStateError(Error):
    pass


class TraceFormatError(Error):
    pass


# The verifier failed while a bound search was narrowing [minV, maxV].
class BoundSearchError(Error):
    def __init__(self, message: str, minV: int, maxV: int):
        super(BoundSearchError, self).__init__(
            f"{message} [partial interval:{minV}..{maxV}]"
        )
        self.minV = minV
        self.maxV = maxV


class SidecarError(Error):
    pass


# An inference step ended without a result ("unreachable", "notEnoughTraces",
# "noRelation").
class InferenceError(Error):
    def __init__(self, message: str, status: str):
        super(InferenceError, self).__init__(message)
        self.status = status
