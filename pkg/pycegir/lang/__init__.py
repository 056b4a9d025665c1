from .parser import parseProgram, parseExpression
from .scope import extractVars
from .printer import formatProgram, formatExpr
from .instrument import instrumentCounter, exitLocation

__all__ = [
    "parseProgram",
    "parseExpression",
    "extractVars",
    "formatProgram",
    "formatExpr",
    "instrumentCounter",
    "exitLocation",
]
