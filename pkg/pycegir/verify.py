from typing import Optional, Dict, List, Iterable, Iterator, Literal, Union, Mapping

import itertools
import logging
import random
import time
from dataclasses import dataclass, field

from pyee import EventEmitter

from .errors import Error, BudgetError, InvalidStateError
from .execution import Interpreter, RunResult, logRunFailure
from .lang.scope import extractVars
from .models.options import InferenceOptions, VerifyBudget
from .models.program import Program
from .octagon import OctConstraint
from .polynomial import Equality
from .traces import Input, Trace, TraceSet


logger = logging.getLogger(__name__)

CandidateStat = Literal["undecided", "disproved", "accepted"]


class FalsePredicate:
    """The constant False; violated by every trace, used for reachability."""

    def holds(self, valuation: Mapping[str, int]) -> bool:
        return False

    def __str__(self) -> str:
        return "False"

    def __repr__(self) -> str:
        return "FALSE"


FALSE = FalsePredicate()

Predicate = Union[Equality, OctConstraint, FalsePredicate]


class Candidate:
    def __init__(self, predicate: Predicate):
        self._predicate = predicate
        self._stat: CandidateStat = "undecided"
        # First violating trace found.
        self._witness: Optional[Trace] = None
        # Accepted after an exhaustive sweep of the input box.
        self._onBox: bool = False

    @property
    def predicate(self) -> Predicate:
        return self._predicate

    @property
    def stat(self) -> CandidateStat:
        return self._stat

    @property
    def witness(self) -> Optional[Trace]:
        return self._witness

    @property
    def acceptedOnBox(self) -> bool:
        return self._onBox

    # @raise {InvalidStateError} unless undecided.
    def disprove(self, witness: Trace):
        if self._stat != "undecided":
            raise InvalidStateError(f"candidate {self._predicate} already {self._stat}")
        self._stat = "disproved"
        self._witness = witness

    # @raise {InvalidStateError} unless undecided.
    def accept(self, onBox: bool = False):
        if self._stat != "undecided":
            raise InvalidStateError(f"candidate {self._predicate} already {self._stat}")
        self._stat = "accepted"
        self._onBox = onBox

    def __repr__(self) -> str:
        return f"Candidate({self._predicate}, {self._stat})"


@dataclass
class VerifyResult:
    location: str
    # Fresh inputs reaching location with a valuation violating a candidate.
    cexInputs: List[Input] = field(default_factory=list)
    # Traces at location of every cex input.
    cexTraces: TraceSet = field(default_factory=TraceSet)
    candidates: List[Candidate] = field(default_factory=list)
    inputsTried: int = 0
    # The whole declared input box was swept.
    complete: bool = False

    @property
    def foundCex(self) -> bool:
        return bool(self.cexInputs)

    @property
    def disproved(self) -> List[Candidate]:
        return [c for c in self.candidates if c.stat == "disproved"]

    @property
    def survivors(self) -> List[Candidate]:
        return [c for c in self.candidates if c.stat != "disproved"]


class Verifier:
    """Counterexample search over concrete inputs.

    Exhaustive mode enumerates the declared input box lexicographically,
    smallest magnitude first; random mode samples it with a seeded generator.
    Runs are cached per input and one run checks every candidate.
    """

    def __init__(self, program: Program, options: Optional[InferenceOptions] = None):
        options = options or InferenceOptions()
        self._program = program
        self._options = options
        self._budget: VerifyBudget = options.verify
        self._interpreter = Interpreter(
            program, options.stepBudget, options.traceCap, options.seed, options.wrap64
        )
        self._cache: Dict[Input, RunResult] = {}
        self._observer: EventEmitter = EventEmitter()
        self._calls = 0

        mode = self._budget.mode
        boxSize = program.boxSize
        if mode is None:
            if boxSize is not None and boxSize <= self._budget.exhaustiveLimit:
                mode = "exhaustive"
            else:
                mode = "random"
        if mode == "exhaustive" and boxSize is None:
            raise BudgetError("exhaustive mode needs finite input ranges")
        self._mode = mode
        logger.debug(
            f"Verifier() [program:{program.name}, mode:{mode}, boxSize:{boxSize}]"
        )

    @property
    def program(self) -> Program:
        return self._program

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def calls(self) -> int:
        return self._calls

    @property
    def runs(self) -> int:
        return len(self._cache)

    # Observer.
    # @emits run - (result: RunResult)
    # @emits cex - (input: Input, candidates: List[Candidate])
    # @emits call - (result: VerifyResult)
    @property
    def observer(self) -> EventEmitter:
        return self._observer

    def inputs(self) -> Iterator[Input]:
        names = tuple(self._program.inputNames)
        if self._mode == "exhaustive":
            ranges = [list(decl.values()) for decl in self._program.inputs]
            for values in itertools.product(*ranges):
                yield Input(names, values)
            return
        rng = random.Random(self._budget.seed)
        span = self._budget.unboundedSpan
        bounds = []
        for decl in self._program.inputs:
            low = decl.low if decl.low is not None else min(-span, (decl.high or 0) - 2 * span)
            high = decl.high if decl.high is not None else max(span, (decl.low or 0) + 2 * span)
            bounds.append((low, high))
        while True:
            yield Input(names, tuple(rng.randint(low, high) for low, high in bounds))

    def _limit(self) -> int:
        if self._budget.maxInputs is not None:
            return self._budget.maxInputs
        if self._mode == "exhaustive":
            return self._program.boxSize
        return self._budget.randomSamples

    def run(self, input: Input) -> RunResult:
        result = self._cache.get(input)
        if result is None:
            result = self._interpreter.run(input)
            self._cache[input] = result
            logRunFailure(result)
            self._observer.emit("run", result)
        return result

    def tracesAt(self, location: str) -> TraceSet:
        """Traces at location over every input run so far."""
        traces = TraceSet()
        for result in self._cache.values():
            if result.ok:
                traces.merge(result.traces.only(location))
        return traces

    def findCex(
        self,
        location: str,
        candidates: Iterable[Candidate],
        known: Iterable[Input] = (),
        maxCex: Optional[int] = None,
    ) -> VerifyResult:
        extractVars(self._program, location)
        candidates = list(candidates)
        if not candidates:
            raise Error("findCex() needs at least one candidate")
        if maxCex is not None and maxCex < 1:
            raise BudgetError(f"maxCex must be positive, got {maxCex}")
        maxCex = maxCex or self._budget.maxCex
        known = set(known)
        pending = [c for c in candidates if c.stat == "undecided"]
        checked = list(pending)
        result = VerifyResult(location=location, candidates=candidates)
        self._calls += 1
        logger.debug(
            f"Verifier findCex() [location:{location}, candidates:{len(pending)}, known:{len(known)}]"
        )

        limit = self._limit()
        timeLimit = self._budget.timeLimit
        start = time.monotonic()
        exhausted = True
        for input in self.inputs():
            if result.inputsTried >= limit:
                exhausted = False
                break
            if timeLimit is not None and time.monotonic() - start > timeLimit:
                exhausted = False
                break
            result.inputsTried += 1
            run = self.run(input)
            if not run.ok:
                continue
            traces = run.traces.at(location)
            if not traces:
                continue
            violated = []
            for candidate in checked:
                witness = _firstViolation(candidate, traces)
                if witness is None:
                    continue
                violated.append(candidate)
                if candidate.stat == "undecided":
                    candidate.disprove(witness)
            if violated and input not in known and len(result.cexInputs) < maxCex:
                result.cexInputs.append(input)
                for trace in traces:
                    result.cexTraces.add(trace, input)
                self._observer.emit("cex", input, violated)
            if len(result.cexInputs) >= maxCex and all(
                c.stat == "disproved" for c in checked
            ):
                exhausted = False
                break

        if self._mode == "exhaustive" and exhausted:
            result.complete = True
            for candidate in checked:
                if candidate.stat == "undecided":
                    candidate.accept(onBox=True)
        logger.debug(
            f"Verifier findCex() | done [location:{location}, tried:{result.inputsTried}, cex:{len(result.cexInputs)}, disproved:{len(result.disproved)}, complete:{result.complete}]"
        )
        self._observer.emit("call", result)
        return result

    def checkReachable(self, location: str) -> Optional[Input]:
        """An input reaching location, None if none was found within budget."""
        result = self.findCex(location, [Candidate(FALSE)], maxCex=1)
        return result.cexInputs[0] if result.cexInputs else None


def _firstViolation(candidate: Candidate, traces: List[Trace]) -> Optional[Trace]:
    for trace in traces:
        if not candidate.predicate.holds(trace.valuation):
            return trace
    return None


def findCex(
    program: Program,
    location: str,
    candidates: Iterable[Candidate],
    known: Iterable[Input] = (),
    options: Optional[InferenceOptions] = None,
) -> VerifyResult:
    return Verifier(program, options).findCex(location, candidates, known)


def checkReachable(
    program: Program, location: str, options: Optional[InferenceOptions] = None
) -> Optional[Input]:
    return Verifier(program, options).checkReachable(location)
