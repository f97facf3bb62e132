"""Recursion operators: construction from a Poisson pair, Nijenhuis torsion, traces.

With the bracket conventions of ``poisson.bracket`` the composite
T = P2 o P1^{-1} has components T^i_j = sum_k P2^{ki} w_kj, where w is the
two-form inverse to P1.  This is the placement for which P2 = P1 gives the
identity.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfGeoError
from ..expr import nodes as N
from ..expr.calculus import diff
from ..expr.chart import CANONICAL, Chart
from ..poisson.calculus import compose
from ..poisson.tensors import (
    DIM, Bivector, OneOneTensor, ScalarField, TwoForm, VectorField, diagonal_tensor,
    identity_tensor,
)

_R = range(DIM)
_A = N.ALPHA_NODE

# generic chart for the lemma: x1..x4 positions, x5..x8 momenta
LEMMA = Chart(tuple(f"x{i}" for i in range(1, DIM + 1)))


def _sum(terms):
    return N.sum_exprs(t for t in terms if not t.is_zero())


def _prod(a, b):
    if a.is_zero() or b.is_zero():
        return N.ZERO
    return N.mul(a, b)


def recursion_from_pair(P2: Bivector, omega1: TwoForm) -> OneOneTensor:
    """T^i_j = sum_k P2^{ki} (omega1)_{kj}; omega1 must be the inverse of P1."""
    arr = np.empty((DIM, DIM), dtype=object)
    for i in _R:
        for j in _R:
            arr[i, j] = _sum(_prod(P2[k, i], omega1[k, j]) for k in _R)
    return OneOneTensor(arr, P2.chart)


def is_diagonal(T: OneOneTensor):
    return all(T[i, j].is_zero() for i in _R for j in _R if i != j)


def nijenhuis_torsion(T: OneOneTensor):
    """(N_T)^h_{ij} = T^k_i d_k T^h_j - T^k_j d_k T^h_i + T^h_k d_j T^k_i - T^h_k d_i T^k_j.

    Returned as an 8x8x8 object array indexed [h, i, j], antisymmetric in (i, j).
    """
    dT = np.empty((DIM, DIM, DIM), dtype=object)         # dT[a, b, c] = d_c T^a_b
    for a in _R:
        for b in _R:
            for c in _R:
                dT[a, b, c] = diff(T[a, b], c)
    out = np.full((DIM, DIM, DIM), N.ZERO, dtype=object)
    for h in _R:
        for i in _R:
            for j in range(i + 1, DIM):
                terms = []
                for k in _R:
                    terms.append(_prod(T[k, i], dT[h, j, k]))
                    terms.append(N.neg(_prod(T[k, j], dT[h, i, k])))
                    terms.append(_prod(T[h, k], dT[k, i, j]))
                    terms.append(N.neg(_prod(T[h, k], dT[k, j, i])))
                v = _sum(terms)
                out[h, i, j] = v
                out[h, j, i] = N.neg(v)
    return out


def tensor_power(T: OneOneTensor, h: int) -> OneOneTensor:
    """T^h at the expression level; diagonal tensors of any h, others only h <= 2."""
    if h < 0:
        raise ConfGeoError("power must be non-negative")
    if h == 0:
        return identity_tensor(T.chart)
    if is_diagonal(T):
        return diagonal_tensor([N.power(T[i, i], N.const(h)) for i in _R], T.chart)
    if h > 2:
        raise ConfGeoError("expression-level powers of non-diagonal tensors are limited to "
                           "h <= 2; use trace_power_numeric")
    out = T
    for _ in range(h - 1):
        out = compose(out, T)
    return out


def trace_power(T: OneOneTensor, h: int) -> ScalarField:
    """Tr(T^h) as a scalar field."""
    if h == 0:
        return ScalarField(N.const(DIM), T.chart)
    P = tensor_power(T, h)
    return ScalarField(_sum(P[i, i] for i in _R), T.chart)


def trace_power_numeric(T: OneOneTensor, h: int, points, alpha):
    """Tr(T^h) at each point by repeated numeric matrix products."""
    M = T.evaluate(points, alpha)
    out = np.broadcast_to(np.eye(DIM), M.shape).copy()
    for _ in range(h):
        out = out @ M
    return np.trace(out, axis1=1, axis2=2)


# Lemma: the model recursion operator and its Hamiltonian fields ----------------

def _abs_pow(x, e):
    return N.power(N.abs_(x), e)


def lemma_tensor(chart: Chart = LEMMA) -> OneOneTensor:
    """T = sum_i |x_i|^{alpha-1} x_i (d_i (x) dx_i + d_{n+i} (x) dx_{n+i}).

    The printed factor "|x_i|^{(alpha-1)}|x_i" is read as |x_i|^{alpha-1} x_i.
    """
    entries = []
    for i in range(4):
        x = N.coord(i)
        entries.append(N.mul(_abs_pow(x, N.sub(_A, N.ONE)), x))
    return diagonal_tensor(entries + entries, chart)


def lemma_field(i: int, chart: Chart = LEMMA) -> VectorField:
    """X_i = -|x_i|^{1-alpha} |x_{n+i}|^{1-alpha} d/dx_{n+i}   (i = 1..4)."""
    if not 1 <= i <= 4:
        raise ConfGeoError("lemma fields are indexed 1..4")
    x, y = N.coord(i - 1), N.coord(3 + i)
    e = N.sub(N.ONE, _A)
    comps = [N.ZERO] * DIM
    comps[3 + i] = N.neg(N.mul(_abs_pow(x, e), _abs_pow(y, e)))
    return VectorField(comps, chart)


def canonical_tensor(chart: Chart = CANONICAL) -> OneOneTensor:
    """T_S = T_F = sum |Q|^{alpha-1} Q (d/dP (x) dP + d/dQ (x) dQ)."""
    return OneOneTensor(lemma_tensor().array, chart)


def canonical_field(chart: Chart = CANONICAL) -> VectorField:
    """X_S = X_F = -alpha^{-2} |P1|^{1-alpha} |Q1|^{1-alpha} d/dP1."""
    e = N.sub(N.ONE, _A)
    comps = [N.ZERO] * DIM
    comps[4] = N.neg(N.mul(N.power(_A, N.const(-2)),
                           N.mul(_abs_pow(N.coord(4), e), _abs_pow(N.coord(0), e))))
    return VectorField(comps, chart)


def printed_canonical_trace(l: int, chart: Chart = CANONICAL) -> ScalarField:
    """The displayed constants 2 sum (Q^mu)^l."""
    return ScalarField(N.mul(N.TWO, N.sum_exprs(N.power(N.coord(m), N.const(l))
                                                for m in range(4))), chart)


def minkowski_recursion():
    """T_alpha = P_{alpha1} o P_alpha^{-1} for the Minkowski pair."""
    from ..poisson.builtins import builtin
    return recursion_from_pair(builtin("P_alpha1"), builtin("omega_alpha"))


def minkowski_recursion_display() -> OneOneTensor:
    """The displayed diagonal: +-alpha^2 p^3 |p|^{alpha-1} |q|^{(alpha^2+alpha-2)/(1+alpha)}."""
    e = N.div(N.add(N.sub(N.power(_A, N.TWO), N.TWO), _A), N.add(N.ONE, _A))
    entries = []
    for m in range(4):
        q, p = N.coord(m), N.coord(4 + m)
        v = N.prod_exprs([N.power(_A, N.TWO), N.power(p, N.const(3)),
                          _abs_pow(p, N.sub(_A, N.ONE)), _abs_pow(q, e)])
        entries.append(v if m == 0 else N.neg(v))
    return diagonal_tensor(entries + entries)


def minkowski_trace_display(h: int) -> ScalarField:
    """Printed Tr(T_alpha^h) = 2^h a^{2h} { d1^h + (-1)^h (sum_k d_k)^h }."""
    e = N.div(N.add(N.sub(N.power(_A, N.TWO), N.TWO), _A), N.add(N.ONE, _A))
    d = []
    for m in range(4):
        q, p = N.coord(m), N.coord(4 + m)
        d.append(N.prod_exprs([N.power(p, N.const(3)), _abs_pow(p, N.sub(_A, N.ONE)), _abs_pow(q, e)]))
    H = N.const(h)
    inner = N.add(N.power(d[0], H),
                  N.mul(N.const((-1) ** h), N.power(N.sum_exprs(d[1:]), H)))
    return ScalarField(N.prod_exprs([N.power(N.TWO, H), N.power(_A, N.mul(N.TWO, H)), inner]))
