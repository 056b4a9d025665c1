from typing import List

from ..models.program import Program
from .nodes import (
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
    COMPARISON_OPS,
)


_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "%": 6,
}
for _op in COMPARISON_OPS:
    _PRECEDENCE[_op] = 4

_NOT_PRECEDENCE = 3
_NEG_PRECEDENCE = 7
_ATOM_PRECEDENCE = 8

INDENT = "  "


def _precedence(expr: Expr) -> int:
    if isinstance(expr, Binary):
        return _PRECEDENCE[expr.op]
    if isinstance(expr, Unary):
        return _NEG_PRECEDENCE if expr.op == "-" else _NOT_PRECEDENCE
    return _ATOM_PRECEDENCE


def _wrap(expr: Expr, parens: bool) -> str:
    text = formatExpr(expr)
    return f"({text})" if parens else text


def formatExpr(expr: Expr) -> str:
    if isinstance(expr, Num):
        return str(expr.value) if expr.value >= 0 else f"({expr.value})"
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Unary):
        operand = expr.operand
        # "- -x" would lex as "--".
        parens = isinstance(operand, (Unary, Binary)) or (
            isinstance(operand, Num) and operand.value < 0
        )
        if expr.op == "!":
            parens = _precedence(operand) < _NOT_PRECEDENCE
        return expr.op + _wrap(operand, parens)
    if isinstance(expr, Binary):
        own = _PRECEDENCE[expr.op]
        if expr.op in COMPARISON_OPS:
            left = _wrap(expr.left, _precedence(expr.left) <= own)
        else:
            left = _wrap(expr.left, _precedence(expr.left) < own)
        right = _wrap(expr.right, _precedence(expr.right) <= own)
        return f"{left} {expr.op} {right}"
    raise TypeError(f"unknown expression {expr!r}")


def _formatBlock(block: Block, depth: int, lines: List[str], prefix: str):
    pad = INDENT * depth
    lines.append(f"{pad}{prefix}{{")
    for stmt in block.stmts:
        _formatStmt(stmt, depth + 1, lines)
    lines.append(f"{pad}}}")


def _formatStmt(stmt: Stmt, depth: int, lines: List[str]):
    pad = INDENT * depth
    if isinstance(stmt, Assign):
        lines.append(f"{pad}{stmt.var} = {formatExpr(stmt.expr)};")
    elif isinstance(stmt, Block):
        _formatBlock(stmt, depth, lines, "")
    elif isinstance(stmt, If):
        _formatBlock(stmt.then, depth, lines, f"if ({formatExpr(stmt.cond)}) ")
        if stmt.orelse.stmts:
            lines[-1] = lines[-1] + " else {"
            for child in stmt.orelse.stmts:
                _formatStmt(child, depth + 1, lines)
            lines.append(f"{pad}}}")
    elif isinstance(stmt, While):
        marker = f"[{stmt.location}] " if stmt.location is not None else ""
        _formatBlock(stmt.body, depth, lines, f"while {marker}({formatExpr(stmt.cond)}) ")
    elif isinstance(stmt, Assume):
        lines.append(f"{pad}assume({formatExpr(stmt.cond)});")
    elif isinstance(stmt, Mark):
        lines.append(f"{pad}[{stmt.location}]")
    else:
        raise TypeError(f"unknown statement {stmt!r}")


def _formatDecl(decl) -> str:
    if decl.low is None and decl.high is None:
        return decl.name
    return f"{decl.name} in [{decl.low}, {decl.high}]"


def formatProgram(program: Program) -> str:
    """Render program as .mpl source that parses back to the same tree."""
    lines = [f"program {program.name};"]
    if program.inputs:
        lines.append("inputs " + ", ".join(_formatDecl(d) for d in program.inputs) + ";")
    for stmt in program.body.stmts:
        _formatStmt(stmt, 0, lines)
    return "\n".join(lines) + "\n"
