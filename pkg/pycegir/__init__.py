from .engine import InvariantEngine, inferProgram, inferFromTraces, analyzeComplexity
from .lang import parseProgram, extractVars, instrumentCounter
from .execution import run
from .verify import Verifier, findCex
from .eqinfer import inferEqualities
from .ineqinfer import inferOctagons, findUpperBound, findLowerBound
from .simplify import removeRedundant
from .complexity import inferCounterRelation, extractBounds
from .models.options import InferenceOptions


__all__ = [
    "InvariantEngine",
    "inferProgram",
    "inferFromTraces",
    "analyzeComplexity",
    "parseProgram",
    "extractVars",
    "instrumentCounter",
    "run",
    "Verifier",
    "findCex",
    "inferEqualities",
    "inferOctagons",
    "findUpperBound",
    "findLowerBound",
    "removeRedundant",
    "inferCounterRelation",
    "extractBounds",
    "InferenceOptions",
]
