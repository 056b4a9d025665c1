from typing import Optional, List, Tuple

import logging

from ..errors import ParseError
from ..models.program import InputDecl, Program
from .lexer import Token, tokenize
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
from .scope import analyzeProgram


logger = logging.getLogger(__name__)

_COMPOUND_ASSIGN = {"+=": "+", "-=": "-", "*=": "*"}


class Parser:
    """Recursive descent parser for .mpl sources (grammar in docs/grammar.md)."""

    def __init__(self, text: str):
        self._tokens: List[Token] = tokenize(text)
        self._index: int = 0

    @property
    def _current(self) -> Token:
        return self._tokens[self._index]

    def _peek(self, offset: int = 1) -> Token:
        index = min(self._index + offset, len(self._tokens) - 1)
        return self._tokens[index]

    def _at(self, value: str) -> bool:
        token = self._current
        return token.kind in ("OP", "KEYWORD") and token.value == value

    def _advance(self) -> Token:
        token = self._current
        if token.kind != "EOF":
            self._index += 1
        return token

    def _expect(self, value: str) -> Token:
        if not self._at(value):
            self._fail(f"expected {value!r}")
        return self._advance()

    def _expectName(self) -> Token:
        if self._current.kind != "NAME":
            self._fail("expected identifier")
        return self._advance()

    def _fail(self, message: str):
        token = self._current
        found = "end of input" if token.kind == "EOF" else repr(token.value)
        raise ParseError(f"{message}, found {found}", token.line, token.column)

    @staticmethod
    def _pos(token: Token) -> Tuple[int, int]:
        return (token.line, token.column)

    def parseProgram(self, name: str = "main") -> Program:
        if self._at("program"):
            self._advance()
            name = self._expectName().value
            self._expect(";")
        inputs: List[InputDecl] = []
        if self._at("inputs"):
            self._advance()
            inputs.append(self._parseInputDecl(inputs))
            while self._at(","):
                self._advance()
                inputs.append(self._parseInputDecl(inputs))
            self._expect(";")
        start = self._current
        stmts = []
        while self._current.kind != "EOF":
            stmt = self._parseStmt()
            if stmt is not None:
                stmts.append(stmt)
        body = Block(tuple(stmts), pos=self._pos(start))
        return analyzeProgram(name, inputs, body)

    def _parseInputDecl(self, seen: List[InputDecl]) -> InputDecl:
        token = self._expectName()
        if any(decl.name == token.value for decl in seen):
            raise ParseError(
                f"duplicate input {token.value}", token.line, token.column
            )
        low: Optional[int] = None
        high: Optional[int] = None
        if self._at("in"):
            self._advance()
            self._expect("[")
            low = self._parseSignedInt()
            self._expect(",")
            high = self._parseSignedInt()
            rbracket = self._expect("]")
            if low > high:
                raise ParseError(
                    f"empty range for input {token.value}",
                    rbracket.line,
                    rbracket.column,
                )
        return InputDecl(name=token.value, low=low, high=high)

    def _parseSignedInt(self) -> int:
        sign = 1
        if self._at("-"):
            self._advance()
            sign = -1
        if self._current.kind != "NUMBER":
            self._fail("expected integer")
        return sign * int(self._advance().value)

    def _parseStmt(self) -> Optional[Stmt]:
        token = self._current
        if self._at(";"):
            self._advance()
            return None
        if self._at("["):
            location = self._parseLocation()
            if self._at(";"):
                self._advance()
            return Mark(location, pos=self._pos(token))
        if self._at("{"):
            return self._parseBlock()
        if self._at("while"):
            self._advance()
            location = self._parseLocation() if self._at("[") else None
            self._expect("(")
            cond = self._parseExpr()
            self._expect(")")
            body = self._parseBody()
            return While(cond, body, location, pos=self._pos(token))
        if self._at("if"):
            return self._parseIf()
        if self._at("assume"):
            self._advance()
            self._expect("(")
            cond = self._parseExpr()
            self._expect(")")
            self._expect(";")
            return Assume(cond, pos=self._pos(token))
        if token.kind == "NAME":
            return self._parseAssign()
        self._fail("expected statement")

    def _parseLocation(self) -> str:
        self._expect("[")
        name = self._expectName().value
        self._expect("]")
        return name

    def _parseBlock(self) -> Block:
        lbrace = self._expect("{")
        stmts = []
        while not self._at("}"):
            if self._current.kind == "EOF":
                self._fail("expected '}'")
            stmt = self._parseStmt()
            if stmt is not None:
                stmts.append(stmt)
        self._expect("}")
        return Block(tuple(stmts), pos=self._pos(lbrace))

    # Loop and branch bodies are always blocks; a single statement is wrapped.
    def _parseBody(self) -> Block:
        if self._at("{"):
            return self._parseBlock()
        token = self._current
        stmt = self._parseStmt()
        return Block(() if stmt is None else (stmt,), pos=self._pos(token))

    def _parseIf(self) -> If:
        token = self._expect("if")
        self._expect("(")
        cond = self._parseExpr()
        self._expect(")")
        then = self._parseBody()
        orelse = Block()
        if self._at("else"):
            self._advance()
            if self._at("if"):
                nested = self._current
                orelse = Block((self._parseIf(),), pos=self._pos(nested))
            else:
                orelse = self._parseBody()
        return If(cond, then, orelse, pos=self._pos(token))

    def _parseAssign(self) -> Assign:
        token = self._expectName()
        target = Var(token.value, pos=self._pos(token))
        op = self._current
        if self._at("++") or self._at("--"):
            self._advance()
            self._expect(";")
            arith = "+" if op.value == "++" else "-"
            expr = Binary(arith, target, Num(1, pos=self._pos(op)), pos=self._pos(op))
            return Assign(token.value, expr, pos=self._pos(token))
        if op.kind == "OP" and op.value in _COMPOUND_ASSIGN:
            self._advance()
            rhs = self._parseExpr()
            self._expect(";")
            expr = Binary(_COMPOUND_ASSIGN[op.value], target, rhs, pos=self._pos(op))
            return Assign(token.value, expr, pos=self._pos(token))
        self._expect("=")
        expr = self._parseExpr()
        self._expect(";")
        return Assign(token.value, expr, pos=self._pos(token))

    def _parseExpr(self) -> Expr:
        return self._parseOr()

    def _parseOr(self) -> Expr:
        left = self._parseAnd()
        while self._at("||"):
            op = self._advance()
            left = Binary("||", left, self._parseAnd(), pos=self._pos(op))
        return left

    def _parseAnd(self) -> Expr:
        left = self._parseNot()
        while self._at("&&"):
            op = self._advance()
            left = Binary("&&", left, self._parseNot(), pos=self._pos(op))
        return left

    def _parseNot(self) -> Expr:
        if self._at("!"):
            op = self._advance()
            return Unary("!", self._parseNot(), pos=self._pos(op))
        return self._parseComparison()

    # Comparisons do not chain.
    def _parseComparison(self) -> Expr:
        left = self._parseAdditive()
        token = self._current
        if token.kind == "OP" and token.value in COMPARISON_OPS:
            self._advance()
            right = self._parseAdditive()
            return Binary(token.value, left, right, pos=self._pos(token))
        return left

    def _parseAdditive(self) -> Expr:
        left = self._parseMultiplicative()
        while self._at("+") or self._at("-"):
            op = self._advance()
            left = Binary(op.value, left, self._parseMultiplicative(), pos=self._pos(op))
        return left

    def _parseMultiplicative(self) -> Expr:
        left = self._parseUnary()
        while self._at("*") or self._at("/") or self._at("%"):
            op = self._advance()
            left = Binary(op.value, left, self._parseUnary(), pos=self._pos(op))
        return left

    def _parseUnary(self) -> Expr:
        if self._at("-"):
            op = self._advance()
            return Unary("-", self._parseUnary(), pos=self._pos(op))
        return self._parseAtom()

    def _parseAtom(self) -> Expr:
        token = self._current
        if token.kind == "NUMBER":
            self._advance()
            return Num(int(token.value), pos=self._pos(token))
        if token.kind == "NAME":
            self._advance()
            return Var(token.value, pos=self._pos(token))
        if self._at("true") or self._at("false"):
            self._advance()
            return BoolLit(token.value == "true", pos=self._pos(token))
        if self._at("("):
            self._advance()
            expr = self._parseExpr()
            self._expect(")")
            return expr
        self._fail("expected expression")

    def parseStandaloneExpr(self) -> Expr:
        expr = self._parseExpr()
        if self._current.kind != "EOF":
            self._fail("unexpected trailing input")
        return expr


def parseProgram(text: str, name: str = "main") -> Program:
    """Parse .mpl source; a `program NAME;` header overrides name."""
    program = Parser(text).parseProgram(name)
    logger.debug(
        f"parseProgram() | parsed [name:{program.name}, locations:{program.locations}]"
    )
    return program


def parseExpression(text: str) -> Expr:
    return Parser(text).parseStandaloneExpr()
