from typing import Optional, Tuple, Union

from dataclasses import dataclass, field


# Source position (line, column) of a node; ignored by equality.
Position = Tuple[int, int]


@dataclass(frozen=True)
class Num:
    value: int
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class BoolLit:
    value: bool
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    # '-' or '!'
    op: str
    operand: "Expr"
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    # Arithmetic: + - * / %. Comparison: < <= == >= > !=. Boolean: && ||.
    op: str
    left: "Expr"
    right: "Expr"
    pos: Position = field(default=(0, 0), compare=False, repr=False)


Expr = Union[Num, BoolLit, Var, Unary, Binary]


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Block:
    stmts: Tuple["Stmt", ...] = ()
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Block
    orelse: Block = Block()
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: Block
    # Location marked at the loop head, visited before every test of cond.
    location: Optional[str] = None
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Assume:
    cond: Expr
    pos: Position = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Mark:
    location: str
    pos: Position = field(default=(0, 0), compare=False, repr=False)


Stmt = Union[Assign, Block, If, While, Assume, Mark]

ARITHMETIC_OPS = ("+", "-", "*", "/", "%")
COMPARISON_OPS = ("<", "<=", "==", ">=", ">", "!=")
BOOLEAN_OPS = ("&&", "||")


def walkStmts(stmt: Stmt):
    """Yield every statement of the tree rooted at stmt, parents first."""
    yield stmt
    if isinstance(stmt, Block):
        for child in stmt.stmts:
            yield from walkStmts(child)
    elif isinstance(stmt, If):
        yield from walkStmts(stmt.then)
        yield from walkStmts(stmt.orelse)
    elif isinstance(stmt, While):
        yield from walkStmts(stmt.body)


def walkExpr(expr: Expr):
    yield expr
    if isinstance(expr, Unary):
        yield from walkExpr(expr.operand)
    elif isinstance(expr, Binary):
        yield from walkExpr(expr.left)
        yield from walkExpr(expr.right)


def stmtExprs(stmt: Stmt):
    """Expressions owned directly by stmt (not by nested statements)."""
    if isinstance(stmt, Assign):
        return [stmt.expr]
    if isinstance(stmt, (If, While, Assume)):
        return [stmt.cond]
    return []


def variablesOf(stmt: Stmt):
    """Every variable name read or written anywhere under stmt."""
    names = set()
    for node in walkStmts(stmt):
        if isinstance(node, Assign):
            names.add(node.var)
        for expr in stmtExprs(node):
            names.update(e.name for e in walkExpr(expr) if isinstance(e, Var))
    return names
