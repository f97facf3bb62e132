"""The three builtin alpha-metrics: Minkowski, Schwarzschild, FLRW (c = 1)."""

from __future__ import annotations

from fractions import Fraction

from ..errors import MetricError
from ..expr import nodes as N
from ..expr.domain import DomainBox
from ..expr.parser import parse
from .metric import MetricSpec

q1, q2, q3, q4 = (N.coord(i) for i in range(4))
_A = N.ALPHA_NODE
_AM1 = N.sub(_A, N.ONE)                       # alpha - 1
_W = N.mul(N.TWO, _AM1)                       # 2(alpha - 1)


def _num(v):
    """Keep integral parameters exact so printed formulas stay readable."""
    v = float(v)
    return N.const(Fraction(int(v))) if v.is_integer() else N.const(v)


def _diag(entries):
    return tuple(tuple(entries[i] if i == j else N.ZERO for j in range(4)) for i in range(4))


def _weighted(entries, weighting):
    if weighting == "line":
        return entries
    if weighting == "conformable":
        a2 = N.power(_A, N.TWO)
        return [N.mul(a2, e) for e in entries]
    raise MetricError(f"unknown weighting {weighting!r} (use 'line' or 'conformable')")


def minkowski(weighting="line"):
    """alpha-Minkowski; the printed line element already carries alpha^2."""
    a2 = N.power(_A, N.TWO)
    ent = [N.mul(a2, N.power(N.abs_(N.coord(i)), _W)) for i in range(4)]
    ent[0] = N.neg(ent[0])
    box = DomainBox(((0.5, 3.0),) * 4)
    return MetricSpec("minkowski", _diag(ent), {}, None, box, weighting)


def schwarzschild(M=1.0, weighting="line", domain=None):
    if not M > 0:
        raise MetricError("Schwarzschild mass M must be positive")
    Mx = _num(M)
    f = N.sub(N.ONE, N.div(N.mul(N.TWO, Mx), q2))          # 1 - 2M/q2
    ent = [
        N.neg(N.mul(f, N.power(q1, _W))),
        N.mul(N.power(f, N.MINUS_ONE), N.power(q2, _W)),
        N.mul(N.power(q2, N.TWO), N.power(q3, _W)),
        N.mul(N.mul(N.power(q2, N.TWO), N.power(q4, _W)), N.power(N.sin(q3), N.TWO)),
    ]
    box = domain or DomainBox(((0.5, 3.0), (2.5 * M, 6.0 * M), (0.3, 2.8), (0.5, 3.0)))
    if box.intervals[1][0] < 2 * M:
        raise MetricError("Schwarzschild domain must satisfy q2 > 2M")
    return MetricSpec("schwarzschild", _diag(_weighted(ent, weighting)),
                      {"M": float(M)}, None, box, weighting)


def flrw(k=0.0, scale_factor="q1^2", weighting="line", domain=None):
    """alpha-FLRW with scale factor a(q1), given as Expr or text in q1."""
    a = scale_factor
    if isinstance(a, str):
        a = parse(a, ["q1"])
    a = N.as_expr(a)
    if a.coords - {0}:
        raise MetricError("scale factor may depend on q1 only")
    a2 = N.power(a, N.TWO)
    kx = _num(k)
    ent = [
        N.neg(N.power(N.abs_(q1), _W)),
        N.div(N.mul(a2, N.power(N.abs_(q2), _W)), N.sub(N.ONE, N.mul(kx, N.power(q2, N.TWO)))),
        N.mul(N.mul(a2, N.power(q2, N.TWO)), N.power(N.abs_(q3), _W)),
        N.mul(N.mul(N.mul(a2, N.power(q2, N.TWO)), N.power(N.abs_(q4), _W)),
              N.power(N.sin(q3), N.TWO)),
    ]
    if domain is None:
        hi2 = 0.9 / k ** 0.5 if k > 0 else 3.0
        domain = DomainBox(((0.5, 3.0), (0.2, hi2), (0.3, 2.8), (0.5, 3.0)))
    if k > 0 and domain.intervals[1][1] ** 2 * k >= 1:
        raise MetricError("FLRW domain must satisfy k*q2^2 < 1")
    return MetricSpec("flrw", _diag(_weighted(ent, weighting)),
                      {"k": float(k)}, a, domain, weighting)


def builtin_metric(name, weighting="line", **params):
    if name == "minkowski":
        return minkowski(weighting)
    if name == "schwarzschild":
        return schwarzschild(params.get("M", 1.0), weighting, params.get("domain"))
    if name == "flrw":
        return flrw(params.get("k", 0.0), params.get("scale_factor", "q1^2"),
                    weighting, params.get("domain"))
    raise MetricError(f"unknown builtin metric {name!r}")
