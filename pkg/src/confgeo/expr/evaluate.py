"""Vectorized numeric evaluation of expression DAGs.

Expressions are compiled into a straight-line program (one instruction per
distinct node, so common subexpressions are computed once) and run over an
``(n, dim)`` array of points with numpy.  In strict mode any non-finite value,
and any Abs/Sign evaluated exactly at zero, raises DomainError naming the
first offending subexpression and the point.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from . import nodes as N

_BINARY = {
    N.ADD: np.add,
    N.SUB: np.subtract,
    N.MUL: np.multiply,
    N.DIV: np.divide,
    N.POW: np.power,
}
_UNARY = {
    N.ABS: np.abs,
    N.SIGN: np.sign,
    N.SIN: np.sin,
    N.COS: np.cos,
    N.TAN: np.tan,
    N.COT: lambda x: 1.0 / np.tan(x),
    N.LN: np.log,
    N.EXP: np.exp,
}


class Program:
    """Straight-line code for a fixed tuple of output expressions."""

    def __init__(self, outputs):
        self.outputs = tuple(outputs)
        self.nodes = N.postorder(self.outputs)
        slot = {id(e): i for i, e in enumerate(self.nodes)}
        self.code = []
        for e in self.nodes:
            self.code.append((e.kind, tuple(slot[id(a)] for a in e.args), e.value))
        self.out_slots = tuple(slot[id(e)] for e in self.outputs)
        self.dim = 1 + max((e.max_coord() for e in self.outputs), default=-1)

    def run(self, points, alpha, strict=True):
        """Evaluate at ``points`` (shape (n, d) or (d,)); returns (len(outputs), n)."""
        X = np.asarray(points, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        n = X.shape[0]
        if X.shape[1] < self.dim:
            raise ValueError(
                f"points have {X.shape[1]} coordinates, expressions need {self.dim}"
            )
        a = float(alpha)
        vals = [None] * len(self.code)
        with np.errstate(all="ignore"):
            for i, (kind, args, value) in enumerate(self.code):
                if kind == N.CONST:
                    v = float(value)
                elif kind == N.COORD:
                    v = X[:, value]
                elif kind == N.ALPHA:
                    v = a
                elif kind in _BINARY:
                    v = _BINARY[kind](vals[args[0]], vals[args[1]])
                else:
                    arg = vals[args[0]]
                    if strict and kind in (N.ABS, N.SIGN) and np.any(np.asarray(arg) == 0):
                        self._raise_at(i, np.asarray(arg) == 0, X, "Abs/Sign at zero (outside the open domain)")
                    v = _UNARY[kind](arg)
                vals[i] = v
        out = np.empty((len(self.out_slots), n))
        for j, s in enumerate(self.out_slots):
            out[j] = vals[s]
        if strict and not np.all(np.isfinite(out)):
            self._locate(vals, X)
        return out

    def _raise_at(self, i, mask, X, message):
        mask = np.broadcast_to(mask, (X.shape[0],))
        row = int(np.argmax(mask))
        raise DomainError(message, self.nodes[i], X[row])

    def _locate(self, vals, X):
        n = X.shape[0]
        for i, (kind, args, _) in enumerate(self.code):
            bad = ~np.isfinite(np.broadcast_to(vals[i], (n,)))
            if not bad.any():
                continue
            for s in args:
                bad = bad & np.isfinite(np.broadcast_to(vals[s], (n,)))
            if bad.any():
                what = {
                    N.DIV: "division by zero",
                    N.LN: "logarithm of a nonpositive value",
                    N.POW: "power outside its real domain",
                }.get(kind, "non-finite value")
                self._raise_at(i, bad, X, what)
        raise DomainError("non-finite value", None, X[0])


@lru_cache(maxsize=512)
def compile_exprs(exprs: tuple) -> Program:
    return Program(exprs)


def evaluate_many(exprs, points, alpha, strict=True):
    """Evaluate several expressions at several points: array (len(exprs), n)."""
    exprs = tuple(N.as_expr(e) for e in exprs)
    return compile_exprs(exprs).run(points, alpha, strict)


def evaluate(e, x, alpha, strict=True):
    """Value of ``e`` at a single point ``x``."""
    return float(evaluate_many((e,), np.asarray(x, dtype=float)[None, :], alpha, strict)[0, 0])


def evaluate_points(e, points, alpha, strict=True):
    """Values of ``e`` at each row of ``points``."""
    return evaluate_many((e,), points, alpha, strict)[0]


def evaluate_array(exprs, points, alpha, strict=True):
    """Evaluate a nested array of expressions; returns shape exprs.shape + (n,)."""
    arr = np.asarray(exprs, dtype=object)
    flat = tuple(N.as_expr(e) for e in arr.ravel())
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    vals = compile_exprs(flat).run(pts, alpha, strict)
    return vals.reshape(arr.shape + (pts.shape[0],))


# scalar fast path -----------------------------------------------------------------
# Straight-line Python source over math.*, for ODE right-hand sides evaluated
# one point at a time.  Domain failures give nan/inf like the numpy path.

def _pow(a, b):
    try:
        return math.pow(a, b)
    except (ValueError, ZeroDivisionError):
        return math.nan
    except OverflowError:
        return math.inf


def _div(a, b):
    try:
        return a / b
    except ZeroDivisionError:
        return math.nan


def _guard(fn):
    def g(x):
        try:
            return fn(x)
        except ValueError:
            return math.nan
        except OverflowError:
            return math.inf
    return g


_SCALAR_ENV = {
    "_pow": _pow, "_div": _div, "abs": abs,
    "_sign": lambda x: math.copysign(1.0, x) if x != 0 else 0.0,
    "_sin": math.sin, "_cos": math.cos, "_tan": math.tan,
    "_cot": _guard(lambda x: 1.0 / math.tan(x)),
    "_ln": _guard(math.log), "_exp": _guard(math.exp),
}
_SCALAR_UNARY = {N.ABS: "abs", N.SIGN: "_sign", N.SIN: "_sin", N.COS: "_cos", N.TAN: "_tan",
                 N.COT: "_cot", N.LN: "_ln", N.EXP: "_exp"}
_SCALAR_OP = {N.ADD: "+", N.SUB: "-", N.MUL: "*"}


@lru_cache(maxsize=256)
def compile_scalar(exprs: tuple):
    """f(x, alpha) -> tuple of floats for a fixed tuple of expressions."""
    prog = compile_exprs(tuple(N.as_expr(e) for e in exprs))
    lines = ["def f(x, a):"]
    for i, (kind, args, value) in enumerate(prog.code):
        if kind == N.CONST:
            rhs = repr(float(value))
        elif kind == N.COORD:
            rhs = f"x[{value}]"
        elif kind == N.ALPHA:
            rhs = "a"
        elif kind in _SCALAR_OP:
            rhs = f"v{args[0]} {_SCALAR_OP[kind]} v{args[1]}"
        elif kind == N.DIV:
            rhs = f"_div(v{args[0]}, v{args[1]})"
        elif kind == N.POW:
            rhs = f"_pow(v{args[0]}, v{args[1]})"
        else:
            rhs = f"{_SCALAR_UNARY[kind]}(v{args[0]})"
        lines.append(f"    v{i} = {rhs}")
    outs = ", ".join(f"v{s}" for s in prog.out_slots)
    lines.append(f"    return ({outs},)")
    env = dict(_SCALAR_ENV)
    exec("\n".join(lines), env)  # noqa: S102 - source is generated from the DAG above
    return env["f"]
