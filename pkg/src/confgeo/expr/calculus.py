"""Exact symbolic partial derivatives and the conformable partial derivative."""

from __future__ import annotations

from . import nodes as N

# (expr, coordinate) -> derivative; shared across calls, entries are immutable
_CACHE: dict = {}


def _rule(e, i, d):
    """Derivative of node ``e`` given derivatives ``d`` of its children."""
    k = e.kind
    if k == N.ADD:
        return N.add(d[0], d[1])
    if k == N.SUB:
        return N.sub(d[0], d[1])
    if k == N.MUL:
        f, g = e.args
        return N.add(N.mul(d[0], g), N.mul(f, d[1]))
    if k == N.DIV:
        f, g = e.args
        # (g f' - f g') / g^2
        return N.div(N.sub(N.mul(g, d[0]), N.mul(f, d[1])), N.power(g, N.TWO))
    if k == N.POW:
        b, x = e.args
        if i not in x.coords:
            # x * b^(x-1) * b'
            if d[0].is_zero():
                return N.ZERO
            return N.mul(N.mul(x, N.power(b, N.sub(x, N.ONE))), d[0])
        # b^x * (x' ln b + x b'/b)
        inner = N.add(N.mul(d[1], N.ln(b)), N.div(N.mul(x, d[0]), b))
        return N.mul(e, inner)
    a = e.args[0]
    da = d[0]
    if da.is_zero():
        return N.ZERO
    if k == N.ABS:
        return N.mul(N.sign(a), da)
    if k == N.SIGN:
        return N.ZERO
    if k == N.SIN:
        return N.mul(N.cos(a), da)
    if k == N.COS:
        return N.neg(N.mul(N.sin(a), da))
    if k == N.TAN:
        return N.mul(N.add(N.ONE, N.power(e, N.TWO)), da)
    if k == N.COT:
        return N.neg(N.mul(N.add(N.ONE, N.power(e, N.TWO)), da))
    if k == N.LN:
        return N.div(da, a)
    if k == N.EXP:
        return N.mul(e, da)
    raise ValueError(f"no derivative rule for {k}")


def diff(e: N.Expr, i: int) -> N.Expr:
    """Exact partial derivative of ``e`` with respect to coordinate ``i``.

    d|x|/dx = sign(x) and d sign(x)/dx = 0, valid on the open domain.
    """
    e = N.as_expr(e)
    key = (e, i)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    for node in N.postorder([e]):
        nk = (node, i)
        if nk in _CACHE:
            continue
        if i not in node.coords:
            _CACHE[nk] = N.ZERO
        elif node.kind == N.COORD:
            _CACHE[nk] = N.ONE
        else:
            d = [_CACHE[(a, i)] for a in node.args]
            _CACHE[nk] = _rule(node, i, d)
    return _CACHE[key]


def gradient(e, dim):
    return tuple(diff(e, i) for i in range(dim))


def alpha_weight(mu: int) -> N.Expr:
    """alpha * |x_mu|^(alpha - 1)."""
    return N.mul(N.ALPHA_NODE, N.power(N.abs_(N.coord(mu)), N.sub(N.ALPHA_NODE, N.ONE)))


def alpha_partial(e: N.Expr, mu: int) -> N.Expr:
    """Conformable partial derivative alpha * |x_mu|^(alpha-1) * de/dx_mu."""
    d = diff(e, mu)
    if d.is_zero():
        return N.ZERO
    return N.mul(alpha_weight(mu), d)


def alpha_differential(e: N.Expr, dim: int):
    """Components of d_alpha e = sum_mu alpha |x_mu|^(alpha-1) de/dx_mu dx_mu."""
    return tuple(alpha_partial(e, mu) for mu in range(dim))
