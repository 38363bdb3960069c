"""Exact expression parser for field elements, e.g. ``"(1 + sqrt(5))/2, 3"``.

Grammar::

    list  := expr (',' expr)*
    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | atom
    atom  := INT | 'sqrt' '(' INT ')' | '(' expr ')'
"""

from __future__ import annotations

import re
from math import isqrt

from .field import FieldContext, QuadElem

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(.))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, word, sym = m.groups()
        if sym is not None and sym not in "+-*/(),":
            raise ParseError(f"unexpected character {sym!r} at position {m.start(3)}")
        tokens.append(num or word or sym)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, ctx: FieldContext, tokens: list[str]):
        self.ctx = ctx
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        self.i += 1
        return tok

    def parse_list(self) -> list[QuadElem]:
        out = [self.expr()]
        while self.peek() == ",":
            self.take(",")
            out.append(self.expr())
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}")
        return out

    def expr(self) -> QuadElem:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> QuadElem:
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero")
                value = value / rhs
        return value

    def unary(self) -> QuadElem:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self) -> QuadElem:
        tok = self.take()
        if tok.isdigit():
            return self.ctx(int(tok))
        if tok == "sqrt":
            self.take("(")
            arg = self.take()
            if not arg.isdigit():
                raise ParseError(f"sqrt expects a non-negative integer, got {arg!r}")
            self.take(")")
            return root_in_field(self.ctx, int(arg))
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected token {tok!r}")


def root_in_field(ctx: FieldContext, m: int) -> QuadElem:
    """``sqrt(m)`` as an element of ``ctx``, when it lies there."""
    r = isqrt(m)
    if r * r == m:
        return ctx(r)
    if m % ctx.d == 0:
        k2 = m // ctx.d
        k = isqrt(k2)
        if k * k == k2:
            return ctx(0, k)
    raise ParseError(f"sqrt({m}) is not in Q(sqrt({ctx.d}))")


def parse_elements(ctx: FieldContext, text: str) -> list[QuadElem]:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    return _Parser(ctx, tokens).parse_list()


def parse_element(ctx: FieldContext, text: str) -> QuadElem:
    elems = parse_elements(ctx, text)
    if len(elems) != 1:
        raise ParseError(f"expected one element, got {len(elems)}")
    return elems[0]
