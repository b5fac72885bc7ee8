"""A small expression language for integrands of one variable ``x``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' exponent)?
    atom   := number | 'x' | ident '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  The exponent
must be constant: a number (optionally signed) or a parenthesised expression
free of ``x``.  Functions: exp, ln, sin, cos, sqrt, abs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .jet import Jet2

__all__ = [
    "Const",
    "Var",
    "Unary",
    "Binary",
    "ExprNode",
    "ExprSyntaxError",
    "parse",
    "render",
    "eval_jet2",
    "evaluate",
    "UNARY_OPS",
]

UNARY_OPS = ("neg", "exp", "ln", "sin", "cos", "sqrt", "abs")
FUNCTIONS = UNARY_OPS[1:]
BINARY_OPS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Unary:
    op: str
    child: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "ExprNode"
    right: "ExprNode"


ExprNode = Union[Const, Var, Unary, Binary]


class ExprSyntaxError(ValueError):
    """Malformed expression; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ExprSyntaxError(message, _byte_offset(self.text, tok[2]), self.text)

    def expect(self, value):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != value:
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected {value!r}, found {found}")
        return self.advance()

    def parse(self) -> ExprNode:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return Unary("neg", self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return Binary("^", base, Const(self.exponent()))
        return base

    def exponent(self) -> float:
        tok = self.peek()
        sign = 1.0
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1.0 if tok[1] == "-" else 1.0
            self.advance()
            tok = self.peek()
        if tok[0] == "number":
            self.advance()
            return sign * float(tok[1])
        node = self.atom()
        if _has_var(node):
            raise self.error("non-constant exponent", tok)
        value = float(evaluate(node, 0.0))
        if not math.isfinite(value):
            raise self.error("exponent is not finite", tok)
        return sign * value

    def atom(self):
        tok = self.peek()
        kind, value, _ = tok
        if kind == "number":
            self.advance()
            return Const(float(value))
        if kind == "ident":
            self.advance()
            if value == "x":
                return Var()
            if value not in FUNCTIONS:
                raise self.error(f"unknown identifier {value!r}", tok)
            self.expect("(")
            child = self.expr()
            self.expect(")")
            return Unary(value, child)
        if kind == "op" and value == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {value!r}")


def _has_var(node: ExprNode) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, Unary):
        return _has_var(node.child)
    return _has_var(node.left) or _has_var(node.right)


def parse(text: str) -> ExprNode:
    """Parse ``text`` into an expression tree.

    >>> parse("1/x")
    Binary(op='/', left=Const(value=1.0), right=Var())
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text or "")
    return _Parser(text).parse()


def render(node: ExprNode) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(node, Const):
        if node.value < 0 or math.copysign(1.0, node.value) < 0:
            return f"(-{_num(-node.value)})"
        return _num(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"(-{render(node.child)})"
        return f"{node.op}({render(node.child)})"
    if node.op == "^":
        return f"({render(node.left)})^{_num(node.right.value)}"
    return f"({render(node.left)} {node.op} {render(node.right)})"


def _num(v: float) -> str:
    return repr(float(v))


def eval_jet2(node: ExprNode, x) -> Jet2:
    """Value, first and second derivative of ``node`` at ``x`` (scalar or array)."""
    if isinstance(x, (list, tuple)):
        x = np.asarray(x, dtype=float)
    return _eval(node, Jet2.variable(x), x)


def _eval(node, xj: Jet2, x) -> Jet2:
    if isinstance(node, Const):
        return Jet2.constant(node.value)
    if isinstance(node, Var):
        return xj
    if isinstance(node, Unary):
        child = _eval(node.child, xj, x)
        if node.op == "neg":
            return -child
        return getattr(child, node.op)(x)
    left = _eval(node.left, xj, x)
    if node.op == "^":
        return left.pow(node.right.value, x)
    right = _eval(node.right, xj, x)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left * right.reciprocal(x)
    raise ValueError(f"unknown operator {node.op!r}")


def evaluate(node: ExprNode, x):
    """Plain value of the expression at ``x``."""
    return eval_jet2(node, x).v


