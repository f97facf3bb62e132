"""Recursive-descent parser for the expression grammar.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := base ('^' factor)?
    base   := number | ident | ident '(' expr ')' | '(' expr ')'

Unary minus binds looser than '^', so ``-a^2`` is ``-(a^2)``.  Integer
literals become exact rationals (``1/2`` folds to the constant 1/2); literals
with a point or exponent become doubles.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from . import nodes as N
from .chart import PHASE

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _position(text, pos):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text, names, symbols):
        self.text = text
        self.names = names
        self.symbols = symbols
        self.tokens = []
        pos = 0
        stripped_end = len(text.rstrip())
        while pos < stripped_end:
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                self.error(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def error(self, message, pos):
        line, col = _position(self.text, pos)
        raise ParseError(message, line, col, self.text)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            found = "end of input" if kind == "end" else repr(val)
            self.error(f"expected {value!r}, found {found}", pos)

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            self.error(f"unexpected token {val!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = N.add(e, rhs) if op == "+" else N.sub(e, rhs)
        return e

    def term(self):
        e = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            e = N.mul(e, rhs) if op == "*" else N.div(e, rhs)
        return e

    def factor(self):
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return N.neg(self.factor())
        return self.power()

    def power(self):
        b = self.base()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            return N.power(b, self.factor())
        return b

    def base(self):
        kind, val, pos = self.take()
        if kind == "num":
            if "." in val or "e" in val or "E" in val:
                return N.const(float(val))
            return N.const(Fraction(int(val)))
        if kind == "ident":
            nxt = self.peek()
            if val in N.FUNCTION_NAMES:
                if nxt[1] != "(":
                    self.error(f"function {val!r} takes exactly one argument in parentheses", pos)
                self.take()
                arg = self.expr()
                if self.peek()[1] == ",":
                    self.error(f"arity mismatch: {val!r} takes exactly one argument", self.peek()[2])
                self.expect(")")
                return N.apply_function(N.FUNCTION_NAMES[val], arg)
            if nxt[1] == "(":
                self.error(f"{val!r} is not a function", pos)
            if val == "alpha":
                return N.ALPHA_NODE
            if val in self.names:
                return N.coord(self.names.index(val))
            if val in self.symbols:
                return N.as_expr(self.symbols[val])
            self.error(f"unknown identifier {val!r}", pos)
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(val)
        self.error(f"unexpected {found}", pos)


def parse(text: str, chart=None, symbols=None) -> N.Expr:
    """Parse ``text`` over ``chart`` (a Chart or a list of coordinate names).

    ``symbols`` maps extra identifiers (parameters such as ``M`` or ``k``) to
    numbers or expressions that are substituted in place.
    """
    if chart is None:
        names = list(PHASE.names)
    elif hasattr(chart, "names"):
        names = list(chart.names)
    else:
        names = list(chart)
    if len(names) > N.MAX_COORD + 1:
        raise ValueError("chart has more than 8 coordinates")
    symbols = dict(symbols or {})
    for reserved in ("alpha", *N.FUNCTION_NAMES):
        if reserved in names or reserved in symbols:
            raise ValueError(f"{reserved!r} is reserved")
    return _Parser(text, names, symbols).parse()
