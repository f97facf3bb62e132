"""Precedence-aware printing that round-trips through the parser."""

from fractions import Fraction

from . import nodes as N
from .chart import default_name

_ATOM = 5
_PREC = {N.ADD: 1, N.SUB: 1, N.MUL: 2, N.DIV: 2, N.POW: 4}
_OP = {N.ADD: " + ", N.SUB: " - ", N.MUL: "*", N.DIV: "/", N.POW: "^"}
# minimum precedence required of (left, right) operands to avoid parentheses
_NEED = {N.ADD: (1, 2), N.SUB: (1, 2), N.MUL: (2, 3), N.DIV: (2, 3), N.POW: (5, 4)}


def _const_text(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return (str(v.numerator), _ATOM) if v >= 0 else (f"({v.numerator})", _ATOM)
        return f"({v.numerator}/{v.denominator})", _ATOM
    text = repr(float(v))
    if "." not in text and "e" not in text and "inf" not in text and "nan" not in text:
        text += ".0"
    return (text, _ATOM) if v >= 0 else (f"({text})", _ATOM)


def to_string(e, chart=None):
    """Render ``e``; ``chart`` maps coordinate indices to names."""
    names = chart.names if chart is not None else None
    memo = {}
    for node in N.postorder([e]):
        k = node.kind
        if k == N.CONST:
            memo[id(node)] = _const_text(node.value)
        elif k == N.COORD:
            i = node.value
            name = names[i] if names is not None and i < len(names) else default_name(i)
            memo[id(node)] = (name, _ATOM)
        elif k == N.ALPHA:
            memo[id(node)] = ("alpha", _ATOM)
        elif k in _PREC:
            (lt, lp), (rt, rp) = memo[id(node.args[0])], memo[id(node.args[1])]
            nl, nr = _NEED[k]
            if lp < nl:
                lt = f"({lt})"
            if rp < nr:
                rt = f"({rt})"
            memo[id(node)] = (lt + _OP[k] + rt, _PREC[k])
        else:
            memo[id(node)] = (f"{N.function_name(k)}({memo[id(node.args[0])][0]})", _ATOM)
    return memo[id(e)][0]
