"""Parser for parameter expressions such as ``(n^2-1)/(4*n)``.

Grammar (standard precedence, binary operators left associative)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") ["-"] INT)?
    atom   := INT | "n" | "c1" | "c2" | "(" expr ")"

Only integer literals are accepted; rationals are written as quotients.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .arith import RatFunc, RatFuncField
from .errors import DixqError

__all__ = ["ParseError", "ParamExpr", "parse_param_expr", "eval_param_expr", "parse_ratfunc"]


class ParseError(DixqError, ValueError):
    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")
        self.message = message
        self.offset = offset
        self.expected = expected


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: int


ParamExpr = Num | Var | Neg | BinOp | Pow

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+[eE][-+]?\d+)|(\d+)|(c1|c2|n)|(\*\*|[-+*/^()])|(\S))")


def _tokenize(src: str):
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex)
        bad_float, integer, name, op, junk = m.groups()
        if bad_float is not None:
            raise ParseError(f"non-rational literal {bad_float!r}; write rationals as p/q", start)
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r}", start, ("n", "c1", "c2", "integer", "("))
        kind = "int" if integer else "name" if name else "op"
        tokens.append((kind, integer or name or op, start))
        pos = m.end()
    tokens.append(("end", "", len(src.rstrip()) if src.strip() else len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos, ("+", "-", "*", "/", "^", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self):
        kind, text, pos = self.peek()
        if kind == "op" and text in ("+", "-"):
            self.take()
            operand = self.unary()
            return Neg(operand, pos) if text == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, pos = self.peek()
        if kind == "op" and text in ("^", "**"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            kind, text, epos = self.take()
            if kind != "int":
                raise ParseError("exponent must be an integer", epos, ("integer",))
            return Pow(base, sign * int(text), pos)
        return base

    def atom(self):
        kind, text, pos = self.take()
        if kind == "int":
            return Num(int(text), pos)
        if kind == "name":
            return Var(text, pos)
        if kind == "op" and text == "(":
            node = self.expr()
            k2, t2, p2 = self.take()
            if t2 != ")":
                raise ParseError("unbalanced parenthesis", p2, (")",))
            return node
        raise ParseError("expected an operand", pos, ("n", "c1", "c2", "integer", "("))


def parse_param_expr(src: str) -> ParamExpr:
    """Parse ``src`` into an expression tree; raises :class:`ParseError`."""
    return _Parser(src).parse()


def eval_param_expr(node: ParamExpr, field, c1=None, c2=None) -> RatFunc:
    """Evaluate an expression tree to a rational function of n over ``field``.

    ``c1``/``c2`` are the values substituted for the curve symbols; for the
    symbolic field they default to its generators.
    """
    ring = RatFuncField(field, "n")
    if c1 is None and getattr(field, "symbolic", False):
        c1, c2 = field.c1, field.c2
    env = {"n": ring.gen()}
    if c1 is not None:
        env["c1"] = ring(c1)
    if c2 is not None:
        env["c2"] = ring(c2)

    def ev(x):
        if isinstance(x, Num):
            return ring(x.value)
        if isinstance(x, Var):
            if x.name not in env:
                raise ParseError(f"symbol {x.name} has no value in this context", x.pos)
            return env[x.name]
        if isinstance(x, Neg):
            return -ev(x.operand)
        if isinstance(x, Pow):
            b = ev(x.base)
            if x.exp < 0 and b.is_zero():
                raise ParseError("zero raised to a negative power", x.pos)
            return b ** x.exp
        left, right = ev(x.left), ev(x.right)
        if x.op == "+":
            return left + right
        if x.op == "-":
            return left - right
        if x.op == "*":
            return left * right
        if right.is_zero():
            raise ParseError("division by an identically zero expression", x.pos)
        return left / right

    return ev(node)


def parse_ratfunc(src: str, field, c1=None, c2=None) -> RatFunc:
    return eval_param_expr(parse_param_expr(src), field, c1, c2)
