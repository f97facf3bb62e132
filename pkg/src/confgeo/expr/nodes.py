"""Immutable, hash-consed expression nodes over a coordinate chart.

Every node is interned: building the same tree twice returns the same object,
so structural equality is identity (``a is b``) and hashing is O(1).  The
smart constructors perform only light, exact folding (constant arithmetic,
neutral and absorbing elements); there is no general simplifier.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence

# node kinds
CONST = "Const"
COORD = "Coord"
ALPHA = "Alpha"
ADD = "Add"
SUB = "Sub"
MUL = "Mul"
DIV = "Div"
POW = "Pow"
ABS = "Abs"
SIGN = "Sign"
SIN = "Sin"
COS = "Cos"
TAN = "Tan"
COT = "Cot"
LN = "Ln"
EXP = "Exp"

BINARY = (ADD, SUB, MUL, DIV, POW)
UNARY = (ABS, SIGN, SIN, COS, TAN, COT, LN, EXP)
FUNCTION_NAMES = {
    "abs": ABS, "sign": SIGN, "sin": SIN, "cos": COS,
    "tan": TAN, "cot": COT, "ln": LN, "exp": EXP,
}
_FUNCTION_SPELLING = {v: k for k, v in FUNCTION_NAMES.items()}

MAX_COORD = 7

_TABLE: dict = {}
_LOCK = threading.Lock()


class Expr:
    """A node of the expression DAG.  Build through the module constructors."""

    __slots__ = ("kind", "args", "value", "coords", "has_alpha", "_hash")

    def __init__(self, kind, args, value, key):
        self.kind = kind
        self.args = args
        self.value = value
        coords = frozenset()
        has_alpha = kind == ALPHA
        for a in args:
            coords = coords | a.coords
            has_alpha = has_alpha or a.has_alpha
        if kind == COORD:
            coords = frozenset((value,))
        self.coords = coords
        self.has_alpha = has_alpha
        self._hash = hash(key)

    def __hash__(self):
        return self._hash

    def __setattr__(self, name, val):
        if hasattr(self, "_hash"):
            raise AttributeError("Expr is immutable")
        object.__setattr__(self, name, val)

    def __reduce__(self):
        # pickling rebuilds through the constructors so interning survives
        return (_rebuild, (to_tuple(self),))

    # arithmetic sugar
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        from .printer import to_string
        text = to_string(self)
        if len(text) > 120:
            text = text[:117] + "..."
        return f"Expr({text})"

    def __str__(self):
        from .printer import to_string
        return to_string(self)

    @property
    def is_const(self):
        return self.kind == CONST

    def is_zero(self):
        return self.kind == CONST and self.value == 0

    def is_one(self):
        return self.kind == CONST and self.value == 1

    def max_coord(self):
        return max(self.coords) if self.coords else -1

    def size(self):
        """Number of distinct nodes in the DAG below (and including) self."""
        seen = set()
        stack = [self]
        while stack:
            e = stack.pop()
            if id(e) in seen:
                continue
            seen.add(id(e))
            stack.extend(e.args)
        return len(seen)


def _intern(kind, args=(), value=None):
    key = (kind, type(value).__name__, value, args)
    node = _TABLE.get(key)
    if node is not None:
        return node
    with _LOCK:
        node = _TABLE.get(key)
        if node is None:
            node = Expr(kind, args, value, key)
            _TABLE[key] = node
    return node


# leaves ---------------------------------------------------------------------

def const(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, bool):
        v = int(v)
    if isinstance(v, Rational):
        v = Fraction(v)
    elif isinstance(v, Real):
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite constant {v!r}")
        if v == 0.0:
            v = 0.0
    else:
        raise TypeError(f"cannot make a constant from {v!r}")
    return _intern(CONST, (), v)


def coord(i: int) -> Expr:
    if not isinstance(i, int) or not 0 <= i <= MAX_COORD:
        raise ValueError(f"coordinate index {i!r} outside 0..{MAX_COORD}")
    return _intern(COORD, (), i)


ALPHA_NODE = _intern(ALPHA)
ZERO = const(0)
ONE = const(1)
TWO = const(2)
HALF = const(Fraction(1, 2))
MINUS_ONE = const(-1)


def alpha() -> Expr:
    return ALPHA_NODE


def as_expr(v) -> Expr:
    return v if isinstance(v, Expr) else const(v)


def _fold(op, x, y):
    """Exact arithmetic on constant values; None when it must not fold."""
    try:
        if op == ADD:
            r = x + y
        elif op == SUB:
            r = x - y
        elif op == MUL:
            r = x * y
        elif op == DIV:
            if y == 0:
                return None
            r = x / y
        else:
            return None
    except (OverflowError, ZeroDivisionError):
        return None
    if isinstance(r, float) and not math.isfinite(r):
        return None
    return r


# binary constructors ----------------------------------------------------------

def add(a: Expr, b: Expr) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if a.kind == CONST and b.kind == CONST:
        r = _fold(ADD, a.value, b.value)
        if r is not None:
            return const(r)
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return _intern(ADD, (a, b))


def sub(a: Expr, b: Expr) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if a.kind == CONST and b.kind == CONST:
        r = _fold(SUB, a.value, b.value)
        if r is not None:
            return const(r)
    if b.is_zero():
        return a
    if a is b:
        return ZERO
    if a.is_zero():
        return neg(b)
    return _intern(SUB, (a, b))


def mul(a: Expr, b: Expr) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if b.kind == CONST and a.kind != CONST:
        a, b = b, a
    if a.kind == CONST:
        if b.kind == CONST:
            r = _fold(MUL, a.value, b.value)
            if r is not None:
                return const(r)
        if a.value == 0:
            return ZERO
        if a.value == 1:
            return b
        if b.kind == MUL and b.args[0].kind == CONST:
            r = _fold(MUL, a.value, b.args[0].value)
            if r is not None:
                return mul(const(r), b.args[1])
    return _intern(MUL, (a, b))


def div(a: Expr, b: Expr) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if a.kind == CONST and b.kind == CONST:
        r = _fold(DIV, a.value, b.value)
        if r is not None:
            return const(r)
    if b.is_one():
        return a
    if a.is_zero() and not b.is_zero():
        return ZERO
    return _intern(DIV, (a, b))


def power(a: Expr, b: Expr) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if b.is_zero():
        return ONE
    if b.is_one():
        return a
    if a.is_one():
        return ONE
    if a.kind == CONST and b.kind == CONST:
        x, y = a.value, b.value
        if isinstance(x, Fraction) and isinstance(y, Fraction) and y.denominator == 1:
            if x != 0 or y > 0:
                if abs(y) <= 64:
                    return const(x ** int(y))
        elif x > 0 or (isinstance(y, Fraction) and y.denominator == 1 and x != 0):
            try:
                r = float(x) ** float(y)
            except (OverflowError, ZeroDivisionError):
                r = None
            if r is not None and isinstance(r, float) and math.isfinite(r):
                return const(r)
    return _intern(POW, (a, b))


def neg(a: Expr) -> Expr:
    a = as_expr(a)
    if a.kind == CONST:
        return const(-a.value)
    return mul(MINUS_ONE, a)


# unary functions ----------------------------------------------------------------

def _unary(kind, a):
    a = as_expr(a)
    if a.kind == CONST:
        v = a.value
        if kind == ABS:
            return const(abs(v))
        if kind == SIGN:
            return const((v > 0) - (v < 0))
        if v == 0 and kind in (SIN, TAN):
            return ZERO
        if v == 0 and kind in (COS, EXP):
            return ONE
        if v == 1 and kind == LN:
            return ZERO
    return _intern(kind, (a,))


def abs_(a):
    return _unary(ABS, a)


def sign(a):
    return _unary(SIGN, a)


def sin(a):
    return _unary(SIN, a)


def cos(a):
    return _unary(COS, a)


def tan(a):
    return _unary(TAN, a)


def cot(a):
    return _unary(COT, a)


def ln(a):
    return _unary(LN, a)


def exp(a):
    return _unary(EXP, a)


def apply_function(kind, a):
    return _unary(kind, a)


def function_name(kind):
    return _FUNCTION_SPELLING[kind]


# helpers --------------------------------------------------------------------------

def build(kind, args, value=None):
    """Rebuild a node of ``kind`` through the smart constructors."""
    if kind == CONST:
        return const(value)
    if kind == COORD:
        return coord(value)
    if kind == ALPHA:
        return ALPHA_NODE
    if kind == ADD:
        return add(*args)
    if kind == SUB:
        return sub(*args)
    if kind == MUL:
        return mul(*args)
    if kind == DIV:
        return div(*args)
    if kind == POW:
        return power(*args)
    return _unary(kind, args[0])


def sum_exprs(terms: Iterable) -> Expr:
    out = ZERO
    for t in terms:
        out = add(out, as_expr(t))
    return out


def prod_exprs(factors: Iterable) -> Expr:
    out = ONE
    for f in factors:
        out = mul(out, as_expr(f))
    return out


def postorder(roots: Sequence[Expr]):
    """Distinct nodes reachable from ``roots``, children before parents."""
    order = []
    seen = set()
    for root in roots:
        if id(root) in seen:
            continue
        stack = [(root, False)]
        while stack:
            e, expanded = stack.pop()
            if expanded:
                order.append(e)
                continue
            if id(e) in seen:
                continue
            seen.add(id(e))
            stack.append((e, True))
            for a in reversed(e.args):
                if id(a) not in seen:
                    stack.append((a, False))
    return order


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace coordinate indices (int keys) or the Alpha node ("alpha" key)."""
    new = {}
    for node in postorder([e]):
        if node.kind == COORD and node.value in mapping:
            new[id(node)] = as_expr(mapping[node.value])
        elif node.kind == ALPHA and "alpha" in mapping:
            new[id(node)] = as_expr(mapping["alpha"])
        elif node.args:
            new[id(node)] = build(node.kind, tuple(new[id(a)] for a in node.args))
        else:
            new[id(node)] = node
    return new[id(e)]


def to_tuple(e: Expr):
    """Nested-tuple form, used for pickling and debugging."""
    if e.kind in (CONST, COORD):
        return (e.kind, e.value)
    if e.kind == ALPHA:
        return (ALPHA,)
    return (e.kind,) + tuple(to_tuple(a) for a in e.args)


def _rebuild(t):
    kind = t[0]
    if kind in (CONST, COORD):
        return build(kind, (), t[1])
    if kind == ALPHA:
        return ALPHA_NODE
    return build(kind, tuple(_rebuild(a) for a in t[1:]))
