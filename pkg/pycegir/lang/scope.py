from typing import Dict, List, FrozenSet

from ..errors import ParseError, UnknownLocationError
from ..models.program import InputDecl, Program
from .nodes import (
    Expr,
    Stmt,
    Var,
    Assign,
    Block,
    If,
    While,
    Assume,
    Mark,
    walkExpr,
)


class _ScopeAnalysis:
    """Definite-assignment pass.

    A variable is in scope at a point when it is an input or assigned on every
    path reaching that point. Reading a variable that is not in scope is an
    error, and every location records the scope it sees.
    """

    def __init__(self):
        self.locations: List[str] = []
        self.scopes: Dict[str, List[str]] = {}

    def _record(self, location: str, assigned: FrozenSet[str], stmt: Stmt):
        if location in self.scopes:
            line, column = stmt.pos
            raise ParseError(f"duplicate location {location}", line, column)
        self.locations.append(location)
        self.scopes[location] = sorted(assigned)

    @staticmethod
    def _checkReads(expr: Expr, assigned: FrozenSet[str]):
        for node in walkExpr(expr):
            if isinstance(node, Var) and node.name not in assigned:
                line, column = node.pos
                raise ParseError(f"undeclared variable {node.name}", line, column)

    def visit(self, stmt: Stmt, assigned: FrozenSet[str]) -> FrozenSet[str]:
        if isinstance(stmt, Assign):
            self._checkReads(stmt.expr, assigned)
            return assigned | {stmt.var}
        if isinstance(stmt, Block):
            for child in stmt.stmts:
                assigned = self.visit(child, assigned)
            return assigned
        if isinstance(stmt, If):
            self._checkReads(stmt.cond, assigned)
            return self.visit(stmt.then, assigned) & self.visit(stmt.orelse, assigned)
        if isinstance(stmt, While):
            if stmt.location is not None:
                self._record(stmt.location, assigned, stmt)
            self._checkReads(stmt.cond, assigned)
            self.visit(stmt.body, assigned)
            return assigned
        if isinstance(stmt, Assume):
            self._checkReads(stmt.cond, assigned)
            return assigned
        if isinstance(stmt, Mark):
            self._record(stmt.location, assigned, stmt)
            return assigned
        raise TypeError(f"unknown statement {stmt!r}")


def analyzeProgram(name: str, inputs: List[InputDecl], body: Block) -> Program:
    analysis = _ScopeAnalysis()
    analysis.visit(body, frozenset(decl.name for decl in inputs))
    return Program(
        name=name,
        inputs=inputs,
        body=body,
        locations=analysis.locations,
        scopes=analysis.scopes,
    )


def extractVars(program: Program, location: str) -> List[str]:
    """Alphabetically ordered variables in scope at location."""
    try:
        return list(program.scopes[location])
    except KeyError:
        raise UnknownLocationError(location)
