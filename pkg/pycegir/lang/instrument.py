from typing import Optional

import logging

from ..errors import InstrumentationError
from ..models.program import Program
from .nodes import (
    Stmt,
    Num,
    Var,
    Binary,
    Assign,
    Block,
    If,
    While,
    Mark,
    walkStmts,
    variablesOf,
)
from .scope import analyzeProgram


logger = logging.getLogger(__name__)

COUNTER = "t"
EXIT_LOCATION = "Lexit"


def _increment(counter: str) -> Assign:
    return Assign(counter, Binary("+", Var(counter), Num(1)))


def _instrument(stmt: Stmt, counter: str) -> Stmt:
    if isinstance(stmt, Block):
        return Block(
            tuple(_instrument(child, counter) for child in stmt.stmts), pos=stmt.pos
        )
    if isinstance(stmt, If):
        return If(
            stmt.cond,
            _instrument(stmt.then, counter),
            _instrument(stmt.orelse, counter),
            pos=stmt.pos,
        )
    if isinstance(stmt, While):
        body = _instrument(stmt.body, counter)
        return While(
            stmt.cond,
            Block((_increment(counter),) + body.stmts, pos=body.pos),
            stmt.location,
            pos=stmt.pos,
        )
    return stmt


def exitLocation(program: Program) -> Optional[str]:
    """Location of the mark ending the program body, if any."""
    stmts = program.body.stmts
    if stmts and isinstance(stmts[-1], Mark):
        return stmts[-1].location
    return None


def instrumentCounter(program: Program, counter: str = COUNTER) -> Program:
    """Add a ghost counter of loop-body entries.

    The counter starts at 0 before the first statement and is incremented as
    the first statement of every loop body. A mark is appended at program exit
    unless the body already ends with one.
    """
    if not any(isinstance(stmt, While) for stmt in walkStmts(program.body)):
        raise InstrumentationError("program has no loop to count")
    if counter in variablesOf(program.body) or counter in program.inputNames:
        raise InstrumentationError(f"counter name {counter} already used")

    body = _instrument(program.body, counter)
    stmts = (Assign(counter, Num(0)),) + body.stmts
    if exitLocation(program) is None:
        location = EXIT_LOCATION
        suffix = 1
        while location in program.locations:
            location = f"{EXIT_LOCATION}{suffix}"
            suffix += 1
        stmts = stmts + (Mark(location),)
    instrumented = analyzeProgram(
        program.name, program.inputs, Block(stmts, pos=program.body.pos)
    )
    logger.debug(
        f"instrumentCounter() | instrumented [program:{program.name}, exit:{exitLocation(instrumented)}]"
    )
    return instrumented
