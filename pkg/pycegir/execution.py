from typing import Optional, Dict, List, Iterable, Literal, Tuple

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import Error, EvaluationError
from .lang.nodes import (
    Expr,
    Stmt,
    Num,
    BoolLit,
    Var,
    Unary,
    Binary,
    Assign,
    Block,
    If,
    While,
    Assume,
    Mark,
)
from .lang.scope import extractVars
from .models.options import StepBudget
from .models.program import Program
from .traces import Input, Trace, TraceSet


logger = logging.getLogger(__name__)

RunStatus = Literal["ok", "diverged", "assumeViolated", "runtimeError"]

_WORD = 2**64
_HALF_WORD = 2**63


@dataclass
class RunResult:
    input: Input
    status: RunStatus
    # Traces recorded up to the end of the run (deduplicated).
    traces: TraceSet
    steps: int = 0
    # Number of loop-body entries over all loops.
    loopEntries: int = 0
    # Dynamic visits per location, before deduplication and capping.
    visits: Dict[str, int] = field(default_factory=dict)
    # Variable values when the run ended.
    final: Dict[str, int] = field(default_factory=dict)
    error: Optional[EvaluationError] = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class _Diverged(Exception):
    pass


class _AssumeViolated(Exception):
    pass


def truncDiv(a: int, b: int) -> int:
    """Integer division rounding toward zero."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


def truncMod(a: int, b: int) -> int:
    return a - b * truncDiv(a, b)


def wrap64(value: int) -> int:
    return (value + _HALF_WORD) % _WORD - _HALF_WORD


class Interpreter:
    """Tree-walking interpreter recording traces at marked locations."""

    def __init__(
        self,
        program: Program,
        budget: Optional[StepBudget] = None,
        traceCap: int = 10**4,
        seed: int = 0,
        wrap: bool = False,
    ):
        self._program = program
        self._budget = budget or StepBudget()
        self._traceCap = traceCap
        self._seed = seed
        self._wrap = wrap
        self._scopes: Dict[str, Tuple[str, ...]] = {
            loc: tuple(extractVars(program, loc)) for loc in program.locations
        }

    @property
    def program(self) -> Program:
        return self._program

    def run(self, input: Input) -> RunResult:
        self._checkInput(input)
        self._env: Dict[str, int] = input.asDict()
        self._steps = 0
        self._loopEntries = 0
        self._lastLocation: Optional[str] = None
        self._visits: Dict[str, int] = {}
        # Reservoir per location: (visit index, trace).
        self._kept: Dict[str, List[Tuple[int, Trace]]] = {}
        self._rng: Optional[random.Random] = None
        self._input = input

        status: RunStatus = "ok"
        error: Optional[EvaluationError] = None
        try:
            self._exec(self._program.body)
        except _Diverged:
            status = "diverged"
        except _AssumeViolated:
            status = "assumeViolated"
        except EvaluationError as exc:
            status = "runtimeError"
            error = exc

        traces = TraceSet()
        for location in self._kept:
            for _, trace in sorted(self._kept[location], key=lambda kept: kept[0]):
                traces.add(trace, input)
        return RunResult(
            input=input,
            status=status,
            traces=traces,
            steps=self._steps,
            loopEntries=self._loopEntries,
            visits=dict(self._visits),
            final=dict(self._env),
            error=error,
        )

    def _checkInput(self, input: Input):
        names = self._program.inputNames
        if list(input.names) != names:
            raise Error(f"input {input} does not match declared inputs {names}")
        for decl, value in zip(self._program.inputs, input.values):
            if not decl.contains(value):
                raise Error(f"input {decl.name}={value} outside its declared range")

    def _step(self):
        self._steps += 1
        if self._steps > self._budget.maxSteps:
            raise _Diverged()

    def _record(self, location: str):
        self._lastLocation = location
        names = self._scopes[location]
        trace = Trace(location, names, tuple(self._env[name] for name in names))
        count = self._visits.get(location, 0)
        self._visits[location] = count + 1
        kept = self._kept.setdefault(location, [])
        if count < self._traceCap:
            kept.append((count, trace))
            return
        # Uniform sampling of the visits beyond the cap.
        if self._rng is None:
            self._rng = random.Random(f"{self._seed}:{self._input.values}")
        slot = self._rng.randrange(count + 1)
        if slot < self._traceCap:
            kept[slot] = (count, trace)

    def _exec(self, stmt: Stmt):
        if isinstance(stmt, Block):
            for child in stmt.stmts:
                self._exec(child)
            return
        self._step()
        if isinstance(stmt, Assign):
            self._env[stmt.var] = self._eval(stmt.expr)
        elif isinstance(stmt, If):
            if self._eval(stmt.cond):
                self._exec(stmt.then)
            else:
                self._exec(stmt.orelse)
        elif isinstance(stmt, While):
            while True:
                if stmt.location is not None:
                    self._record(stmt.location)
                self._step()
                if not self._eval(stmt.cond):
                    break
                self._loopEntries += 1
                self._exec(stmt.body)
        elif isinstance(stmt, Assume):
            if not self._eval(stmt.cond):
                raise _AssumeViolated()
        elif isinstance(stmt, Mark):
            self._record(stmt.location)
        else:
            raise TypeError(f"unknown statement {stmt!r}")

    def _eval(self, expr: Expr) -> int:
        if isinstance(expr, Num):
            return expr.value
        if isinstance(expr, Var):
            return self._env[expr.name]
        if isinstance(expr, BoolLit):
            return int(expr.value)
        if isinstance(expr, Unary):
            value = self._eval(expr.operand)
            if expr.op == "!":
                return int(not value)
            return self._arith(-value)
        if isinstance(expr, Binary):
            op = expr.op
            if op == "&&":
                return int(bool(self._eval(expr.left)) and bool(self._eval(expr.right)))
            if op == "||":
                return int(bool(self._eval(expr.left)) or bool(self._eval(expr.right)))
            left = self._eval(expr.left)
            right = self._eval(expr.right)
            if op == "+":
                return self._arith(left + right)
            if op == "-":
                return self._arith(left - right)
            if op == "*":
                return self._arith(left * right)
            if op in ("/", "%"):
                if right == 0:
                    raise EvaluationError(
                        "division by zero" if op == "/" else "modulo by zero",
                        location=self._lastLocation,
                        position=expr.pos,
                    )
                if op == "/":
                    return self._arith(truncDiv(left, right))
                return self._arith(truncMod(left, right))
            if op == "<":
                return int(left < right)
            if op == "<=":
                return int(left <= right)
            if op == "==":
                return int(left == right)
            if op == ">=":
                return int(left >= right)
            if op == ">":
                return int(left > right)
            if op == "!=":
                return int(left != right)
        raise TypeError(f"unknown expression {expr!r}")

    def _arith(self, value: int) -> int:
        return wrap64(value) if self._wrap else value


def run(
    program: Program,
    input: Input,
    budget: Optional[StepBudget] = None,
    traceCap: int = 10**4,
    seed: int = 0,
    wrap: bool = False,
) -> RunResult:
    return Interpreter(program, budget, traceCap, seed, wrap).run(input)


def logRunFailure(result: RunResult):
    if result.status == "runtimeError":
        logger.warning(
            f"run() | runtime error [input:{result.input}, error:{result.error.message}, location:{result.error.location}]"
        )
    elif result.status != "ok":
        logger.debug(f"run() | {result.status} [input:{result.input}]")


def execMany(
    program: Program,
    location: str,
    inputs: Iterable[Input],
    budget: Optional[StepBudget] = None,
    traceCap: int = 10**4,
    seed: int = 0,
    wrap: bool = False,
    jobs: int = 1,
) -> TraceSet:
    """Union of the traces at location over every successful run."""
    extractVars(program, location)
    interpreter = Interpreter(program, budget, traceCap, seed, wrap)
    inputs = list(inputs)
    if jobs > 1 and len(inputs) > 1:
        # A fresh interpreter per run keeps per-run state thread local.
        def runOne(input: Input) -> RunResult:
            return Interpreter(program, budget, traceCap, seed, wrap).run(input)

        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(runOne, inputs))
    else:
        results = [interpreter.run(input) for input in inputs]

    traces = TraceSet()
    for result in results:
        if not result.ok:
            logRunFailure(result)
            continue
        traces.merge(result.traces.only(location))
    logger.debug(
        f"execMany() | done [location:{location}, inputs:{len(inputs)}, traces:{len(traces)}]"
    )
    return traces
