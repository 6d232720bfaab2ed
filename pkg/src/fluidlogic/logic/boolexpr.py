"""Boolean expressions: tree types, a recursive-descent parser and evaluation.

Grammar, loosest binding first::

    expr := xor ('|' xor)*          # also OR
    xor  := and ('^' and)*          # also XOR
    and  := unary ('&' unary)*      # also AND
    unary:= '!' unary | atom        # also NOT
    atom := identifier | '(' expr ')'

Keywords are case-insensitive and cannot be used as variable names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


class BoolSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        self.message = message
        self.pos = pos  # 0-based character offset
        super().__init__(f"col {pos + 1}: {message}")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "BoolExpr"


@dataclass(frozen=True)
class And:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Or:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class Xor:
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Union[Var, Not, And, Or, Xor]
BINARY = {And: "&", Or: "|", Xor: "^"}
_PREC = {Or: 1, Xor: 2, And: 3}

_KEYWORDS = {"not": "!", "and": "&", "or": "|", "xor": "^"}
_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """(kind, value, pos) with kind in {'id', 'op', 'end'}."""
    out = []
    for m in _TOKEN.finditer(text):
        ident, sym = m.group(1), m.group(2)
        if ident is not None:
            low = ident.lower()
            if low in _KEYWORDS:
                out.append(("op", _KEYWORDS[low], m.start(1)))
            else:
                out.append(("id", ident, m.start(1)))
        elif sym is not None:
            if sym not in "!&|^()":
                raise BoolSyntaxError(f"unexpected character {sym!r}", m.start(2))
            out.append(("op", sym, m.start(2)))
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def binary(self, level: int) -> BoolExpr:
        if level == 4:
            return self.unary()
        op, cls = {1: ("|", Or), 2: ("^", Xor), 3: ("&", And)}[level]
        left = self.binary(level + 1)
        while self.peek()[:2] == ("op", op):
            self.take()
            left = cls(left, self.binary(level + 1))
        return left

    def unary(self) -> BoolExpr:
        kind, val, pos = self.take()
        if (kind, val) == ("op", "!"):
            return Not(self.unary())
        if kind == "id":
            return Var(val)
        if (kind, val) == ("op", "("):
            inner = self.binary(1)
            kind2, val2, pos2 = self.take()
            if (kind2, val2) != ("op", ")"):
                raise BoolSyntaxError("expected ')'", pos2)
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise BoolSyntaxError(f"expected a variable, '!' or '(' but found {what}", pos)


def parse_bool_expr(text: str) -> BoolExpr:
    """Parse ``text``; raises ``BoolSyntaxError`` with the offending column."""
    p = _Parser(text)
    expr = p.binary(1)
    kind, val, pos = p.peek()
    if kind != "end":
        raise BoolSyntaxError(f"unexpected {val!r}", pos)
    return expr


def variables(e: BoolExpr) -> list[str]:
    """Variable names in first-occurrence (left to right) order."""
    seen: dict[str, None] = {}

    def walk(x):
        if isinstance(x, Var):
            seen.setdefault(x.name)
        elif isinstance(x, Not):
            walk(x.arg)
        else:
            walk(x.left)
            walk(x.right)

    walk(e)
    return list(seen)


def evaluate(e: BoolExpr, env: Mapping[str, bool]) -> bool:
    if isinstance(e, Var):
        return bool(env[e.name])
    if isinstance(e, Not):
        return not evaluate(e.arg, env)
    a, b = evaluate(e.left, env), evaluate(e.right, env)
    if isinstance(e, And):
        return a and b
    if isinstance(e, Or):
        return a or b
    return a != b


def to_text(e: BoolExpr) -> str:
    """Render with the minimum parentheses; parses back to the same tree."""

    def go(x, parent_prec: int, right: bool) -> str:
        if isinstance(x, Var):
            return x.name
        if isinstance(x, Not):
            return "!" + go(x.arg, 4, False)
        prec = _PREC[type(x)]
        s = f"{go(x.left, prec, False)} {BINARY[type(x)]} {go(x.right, prec, True)}"
        # operators are left-associative, so a right child of equal precedence needs parentheses
        if prec < parent_prec or (right and prec == parent_prec):
            return f"({s})"
        return s

    return go(e, 0, False)


def depth(e: BoolExpr) -> int:
    if isinstance(e, Var):
        return 0
    if isinstance(e, Not):
        return 1 + depth(e.arg)
    return 1 + max(depth(e.left), depth(e.right))
