"""Tiny expression language for profile functions of one variable.

Grammar (``^`` is right associative and binds tighter than unary minus)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | VARIABLE | FUNC '(' expr ')' | '(' expr ')'

``VARIABLE`` is ``xi`` or ``r``; ``FUNC`` is one of :data:`FUNCTIONS`.
Trees are immutable and evaluate on any number type from :mod:`.dual`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from . import dual
from .errors import EvalDomainError, ParseError

VARIABLES = ("xi", "r")
FUNCTIONS = {
    "exp": dual.exp,
    "ln": dual.log,
    "sin": dual.sin,
    "cos": dual.cos,
    "sinh": dual.sinh,
    "cosh": dual.cosh,
    "sqrt": dual.sqrt,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "name", "op", "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos),
                             {"number", "identifier", "operator"})
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), _byte_offset(text, m.start(kind))))
        pos = m.end()
    toks.append(_Tok("end", "", _byte_offset(text, len(text))))
    return toks


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, variable: Optional[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.variable = variable

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected) -> None:
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"unexpected {what}", t.offset, expected)

    def eat(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.eat("-"):
            return Neg(self.unary())
        if self.eat("+"):
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.eat("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(float(t.text))
        if t.kind == "name":
            if t.text in VARIABLES:
                if self.variable is not None and t.text != self.variable:
                    raise ParseError(f"variable {t.text!r} not allowed here", t.offset,
                                     {self.variable})
                self.i += 1
                return Var(t.text)
            if t.text in FUNCTIONS:
                self.i += 1
                if not self.eat("("):
                    self.fail({"("})
                arg = self.expr()
                if not self.eat(")"):
                    self.fail({")", "+", "-", "*", "/", "^"})
                return Call(t.text, arg)
            raise ParseError(f"unknown identifier {t.text!r}", t.offset,
                             set(VARIABLES) | set(FUNCTIONS))
        if self.eat("("):
            node = self.expr()
            if not self.eat(")"):
                self.fail({")", "+", "-", "*", "/", "^"})
            return node
        self.fail({"number", "variable", "function", "(", "-"})
        raise AssertionError("unreachable")


def parse(text: str, variable: Optional[str] = None) -> Node:
    """Parse ``text`` into an expression tree.

    If ``variable`` is given, any other variable token is a :class:`ParseError`.
    """
    return _Parser(text, variable).parse()


def evaluate(node: Node, t):
    """Evaluate ``node`` with its variable bound to ``t`` (any number type)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Neg):
        return -evaluate(node.arg, t)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, t))
    a = evaluate(node.left, t)
    b = evaluate(node.right, t)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if isinstance(b, (int, float)) and b == 0:
            raise EvalDomainError("division by zero")
        return a / b
    return dual.power(a, b)


def variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, (Neg, Call)):
        return variables(node.arg)
    return variables(node.left) | variables(node.right)


def to_text(node: Node) -> str:
    """Pretty-print ``node``; re-parsing the output yields an identical tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.arg)})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
