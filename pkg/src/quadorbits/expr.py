"""A tiny parser for polynomial expressions such as ``"x^2 + y, 3/2xy - x, 0"``.

Supports +, -, *, /, ^ or ** (non-negative integer powers), parentheses,
integer and decimal-free rational literals, implicit multiplication (``2x``,
``xy``, ``x(y+1)``) and single-letter variables.  Division is only allowed by
constants, so results stay polynomial.
"""

from __future__ import annotations

import re
from typing import List, Sequence

from .polycore import Poly, Q

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^(),])|([A-Za-z]))")


class ExprError(ValueError):
    """Malformed expression; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), start))
        elif m.group(2):
            out.append(("op", m.group(2), start))
        else:
            out.append(("var", m.group(3), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = tuple(vars)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ExprError(f"expected {op!r}", tok[2])

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        out = self.term() * sign
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                out = out + t if tok[1] == "+" else out - t
            else:
                return out

    def term(self) -> Poly:
        out = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                out = out * self.power()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                d = self.power()
                if not d.is_constant() or d.is_zero():
                    raise ExprError("division by a non-constant or zero", tok[2])
                out = out / d.constant_value()
            elif tok[0] in ("num", "var") or (tok[0] == "op" and tok[1] == "("):
                out = out * self.power()
            else:
                return out

    def power(self) -> Poly:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            e = self.take()
            if e[0] != "num":
                raise ExprError("exponent must be a non-negative integer", e[2])
            return base ** e[1]
        return base

    def atom(self) -> Poly:
        tok = self.take()
        if tok[0] == "num":
            return Poly.const(tok[1], self.vars)
        if tok[0] == "var":
            if tok[1] not in self.vars:
                raise ExprError(f"unknown variable {tok[1]!r}", tok[2])
            return Poly.var(tok[1], self.vars)
        if tok[0] == "op" and tok[1] == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if tok[0] == "op" and tok[1] == "-":
            return -self.power()
        raise ExprError("unexpected token", tok[2])


def parse_poly(text: str, vars: Sequence[str] = ("x", "y")) -> Poly:
    p = _Parser(text, vars)
    out = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ExprError("trailing input", tok[2])
    return out


def parse_components(text: str, vars: Sequence[str] = ("x", "y")) -> List[Poly]:
    """Comma-separated polynomials, optionally wrapped in parentheses."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")") and _balanced(text[1:-1]):
        text = text[1:-1]
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((start, text[start:i]))
            start = i + 1
    parts.append((start, text[start:]))
    out = []
    for offset, chunk in parts:
        if not chunk.strip():
            raise ExprError("empty component", offset)
        try:
            out.append(parse_poly(chunk, vars))
        except ExprError as exc:
            raise ExprError(str(exc).rsplit(" at position", 1)[0], offset + exc.position) from None
    return out


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def format_components(polys: Sequence[Poly]) -> str:
    return ", ".join(str(p) for p in polys)
