"""Hamilton-Jacobi separation constants for the alpha-Schwarzschild and alpha-FLRW systems.

Each constant is built as a ScalarField on the (q, p) chart, so that first
integrals can be checked symbolically through {H, c}_alpha and appended as
trajectory monitors.  The momentum-to-a inversion uses the positive branch
sgn(q1) = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import Check
from .errors import ConfGeoError, DomainError
from .expr import nodes as N
from .expr.domain import numeric_equal
from .expr.evaluate import evaluate_many
from .poisson.bracket import ALPHA, PoissonStructure
from .poisson.builtins import (
    _scale, flrw_box, flrw_hamiltonian, schwarzschild_box, schwarzschild_hamiltonian,
)
from .poisson.tensors import ScalarField

q = [N.coord(i) for i in range(4)]
p = [N.coord(4 + i) for i in range(4)]
_E = N.mul(N.TWO, N.sub(N.ONE, N.ALPHA_NODE))          # 2(1-alpha)


def _num(v):
    from .poisson.builtins import _param
    return _param(v)


def _sq(x):
    return N.power(x, N.TWO)


def _G():
    return N.mul(N.power(q[3], _E), _sq(p[3]))


def _angular(G):
    """(q3)^{2(1-alpha)} p3^2 + G / sin^2 q3."""
    return N.add(N.mul(N.power(q[2], _E), _sq(p[2])), N.div(G, _sq(N.sin(q[2]))))


# Schwarzschild ---------------------------------------------------------------------

def schwarzschild_fields(M=1) -> dict:
    """{"E_S", "a", "K", "G"} as scalar fields."""
    G = _G()
    return {
        "E_S": schwarzschild_hamiltonian(M),
        "a": ScalarField(N.mul(p[0], N.power(q[0], N.sub(N.ONE, N.ALPHA_NODE)))),
        "K": ScalarField(_angular(G)),
        "G": ScalarField(G),
    }


def schwarzschild_radial_K(M=1) -> ScalarField:
    """K = 2 E_S r^2 + f^{-1} r^2 a^2 - f r^{2(2-alpha)} p2^2,  f = 1 - 2M/r."""
    c = schwarzschild_fields(M)
    r2 = _sq(q[1])
    f = N.sub(N.ONE, N.div(N.mul(N.TWO, _num(M)), q[1]))
    return ScalarField(N.sum_exprs([
        N.prod_exprs([N.TWO, c["E_S"].expr, r2]),
        N.prod_exprs([N.power(f, N.MINUS_ONE), r2, _sq(c["a"].expr)]),
        N.neg(N.prod_exprs([f, N.power(q[1], N.mul(N.TWO, N.sub(N.TWO, N.ALPHA_NODE))), _sq(p[1])])),
    ]))


# FLRW -------------------------------------------------------------------------------

def flrw_fields(k=0, scale_factor="q1^2") -> dict:
    """{"E_F", "K", "L", "G"} as scalar fields."""
    G = _G()
    L = _angular(G)
    K = N.add(N.prod_exprs([N.sub(N.ONE, N.mul(_num(k), _sq(q[1]))), N.power(q[1], _E), _sq(p[1])]),
              N.div(L, _sq(q[1])))
    return {
        "E_F": flrw_hamiltonian(k, scale_factor),
        "K": ScalarField(K),
        "L": ScalarField(L),
        "G": ScalarField(G),
    }


def flrw_temporal_K(k=0, scale_factor="q1^2") -> ScalarField:
    """K = 2 E_F R^2(q1) + (q1)^{2(1-alpha)} R^2(q1) p1^2."""
    R2 = _sq(_scale(scale_factor))
    E = flrw_hamiltonian(k, scale_factor).expr
    return ScalarField(N.add(N.prod_exprs([N.TWO, E, R2]),
                             N.prod_exprs([N.power(q[0], _E), R2, _sq(p[0])])))


# numeric constant sets -----------------------------------------------------------------

@dataclass(frozen=True)
class ConstantSet:
    metric: str
    values: dict

    def __getitem__(self, k):
        return self.values[k]


def _evaluate(fields, x, alpha, box):
    x = np.asarray(x, dtype=float)
    if not box.contains(x):
        raise DomainError("point outside the open domain", None, x)
    names = list(fields)
    vals = evaluate_many(tuple(fields[n].expr for n in names), x[None, :], alpha)[:, 0]
    return dict(zip(names, (float(v) for v in vals)))


def schwarzschild_constants(x, alpha=0.7, M=1) -> ConstantSet:
    from .flow import open_box
    return ConstantSet("schwarzschild", _evaluate(schwarzschild_fields(M), x, alpha,
                                                  open_box("schwarzschild", M=float(M))))


def flrw_constants(x, alpha=0.7, k=0, scale_factor="q1^2") -> ConstantSet:
    x = np.asarray(x, dtype=float)
    if not 1.0 - k * x[1] ** 2 > 0:
        raise DomainError("curvature bound 1 - k q2^2 > 0 violated", None, x)
    from .flow import open_box
    return ConstantSet("flrw", _evaluate(flrw_fields(k, scale_factor), x, alpha,
                                         open_box("flrw", k=float(k))))


@dataclass(frozen=True)
class CanonicalQ:
    Q: tuple
    on_chart: bool          # False when some Q vanishes (boundary of the open chart)
    note: str = ""


def canonical_constants(cs: ConstantSet) -> CanonicalQ:
    """Schwarzschild: (E_S, a, K, sqrt G);  FLRW: (E_F, K, sqrt L, sqrt G)."""
    v = cs.values

    def root(name):
        if v[name] < 0:
            raise DomainError(f"negative radicand {name} = {v[name]!r}")
        return math.sqrt(v[name])

    if cs.metric == "schwarzschild":
        Q = (v["E_S"], v["a"], v["K"], root("G"))
    elif cs.metric == "flrw":
        Q = (v["E_F"], v["K"], root("L"), root("G"))
    else:
        raise ConfGeoError(f"unknown constant set {cs.metric!r}")
    zero = [i + 1 for i, x in enumerate(Q) if x == 0]
    note = f"Q{zero} = 0 lies outside the open chart" if zero else ""
    return CanonicalQ(Q, not zero, note)


# suite -----------------------------------------------------------------------------------

def hj_suite(alpha=0.7, n=100, seed=0, tol=1e-8, M=1, k=0, scale_factor="q1^2",
             structure: PoissonStructure = None):
    """{H, c}_alpha = 0 for every separation constant, plus the two K identities."""
    P = structure or ALPHA
    out = []
    sbox, fbox = schwarzschild_box(M), flrw_box(k)
    for metric, fields, H, box in (
        ("schwarzschild", schwarzschild_fields(M), schwarzschild_hamiltonian(M), sbox),
        ("flrw", flrw_fields(k, scale_factor), flrw_hamiltonian(k, scale_factor), fbox),
    ):
        pts = box.sample(n, seed)
        for name, c in fields.items():
            b = P.bracket(H, c).expr
            vals = evaluate_many((b, c.expr), pts, alpha)
            # scale by the size of the constant so tolerances are relative
            res = np.abs(vals[0]) / (1.0 + np.abs(vals[1]))
            j = int(np.argmax(res))
            out.append(Check(f"{metric} {{H, {name}}} = 0", float(res[j]),
                             tuple(float(x) for x in pts[j]), tol))
    r = numeric_equal(schwarzschild_fields(M)["K"].expr, schwarzschild_radial_K(M).expr, sbox,
                      n=n, tol=1e-9, seed=seed, alpha=alpha)
    out.append(Check("schwarzschild K angular = radial", r.max_residual, r.worst_point, 1e-9))
    r = numeric_equal(flrw_fields(k, scale_factor)["K"].expr, flrw_temporal_K(k, scale_factor).expr,
                      fbox, n=n, tol=1e-10, seed=seed, alpha=alpha)
    out.append(Check("flrw K spatial = temporal", r.max_residual, r.worst_point, 1e-10))
    return out
