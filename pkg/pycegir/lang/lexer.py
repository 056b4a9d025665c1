from typing import List, NamedTuple

import re

from ..errors import ParseError


KEYWORDS = {
    "program",
    "inputs",
    "in",
    "while",
    "if",
    "else",
    "assume",
    "true",
    "false",
}

_TOKEN_SPEC = [
    ("COMMENT", r"//[^\n]*"),
    ("NUMBER", r"\d+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    (
        "OP",
        r"\+\+|--|\+=|-=|\*=|<=|>=|==|!=|&&|\|\||[-+*/%<>!=(){}\[\];,]",
    ),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]

_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{regex})" for name, regex in _TOKEN_SPEC))


class Token(NamedTuple):
    # NUMBER, NAME, KEYWORD, OP or EOF.
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line = 1
    lineStart = 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() - lineStart + 1
        if kind == "NEWLINE":
            line += 1
            lineStart = match.end()
            continue
        if kind in ("SKIP", "COMMENT"):
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {value!r}", line, column)
        if kind == "NAME" and value in KEYWORDS:
            kind = "KEYWORD"
        tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - lineStart + 1))
    return tokens
