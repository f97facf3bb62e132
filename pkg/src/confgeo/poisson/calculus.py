"""Exterior calculus, Lie derivatives and the Schouten bracket in coordinates.

Conventions:  (iota_X w)_j = X^i w_ij,  (df)_i = d_i f,
(d t)_ij = d_i t_j - d_j t_i,  (d w)_ijk = d_i w_jk + d_j w_ki + d_k w_ij.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from ..errors import ConfGeoError
from ..expr import nodes as N
from ..expr.calculus import diff
from .tensors import (
    DIM, Bivector, Field, OneForm, OneOneTensor, ScalarField, ThreeForm, Trivector,
    TwoForm, VectorField, as_scalar,
)

_R = range(DIM)


def _sum(terms):
    return N.sum_exprs(t for t in terms if not t.is_zero())


def _prod(a, b):
    if a.is_zero() or b.is_zero():
        return N.ZERO
    return N.mul(a, b)


def _antisym2(fn):
    """8x8 antisymmetric object array from fn(i, j) evaluated for i < j."""
    arr = np.full((DIM, DIM), N.ZERO, dtype=object)
    for i, j in combinations(_R, 2):
        v = fn(i, j)
        arr[i, j] = v
        arr[j, i] = N.neg(v)
    return arr


def _antisym3(fn):
    arr = np.full((DIM,) * 3, N.ZERO, dtype=object)
    for i, j, k in combinations(_R, 3):
        v = fn(i, j, k)
        nv = N.neg(v)
        arr[i, j, k] = arr[j, k, i] = arr[k, i, j] = v
        arr[j, i, k] = arr[i, k, j] = arr[k, j, i] = nv
    return arr


# functions and one-forms ---------------------------------------------------------

def d(f) -> OneForm:
    """Exterior derivative of a scalar field."""
    f = as_scalar(f)
    return OneForm([diff(f.expr, i) for i in _R], f.chart)


def apply(X: VectorField, f) -> ScalarField:
    """X(f) = X^i d_i f."""
    f = as_scalar(f, X.chart)
    return ScalarField(_sum(_prod(X[i], diff(f.expr, i)) for i in _R), X.chart)


def exterior_derivative(t):
    """d on scalars, one-forms and two-forms."""
    if isinstance(t, (ScalarField, N.Expr, int, float)):
        return d(t)
    if isinstance(t, OneForm):
        return TwoForm(_antisym2(lambda i, j: N.sub(diff(t[j], i), diff(t[i], j))), t.chart)
    if isinstance(t, TwoForm):
        return ThreeForm(_antisym3(lambda i, j, k: _sum(
            (diff(t[j, k], i), diff(t[k, i], j), diff(t[i, j], k)))), t.chart)
    raise ConfGeoError(f"exterior derivative not implemented for {type(t).__name__}")


def interior_product(X: VectorField, t):
    """iota_X of a one-, two- or three-form (contraction on the first slot)."""
    if isinstance(t, OneForm):
        return ScalarField(_sum(_prod(X[i], t[i]) for i in _R), X.chart)
    if isinstance(t, TwoForm):
        return OneForm([_sum(_prod(X[i], t[i, j]) for i in _R) for j in _R], X.chart)
    if isinstance(t, ThreeForm):
        return TwoForm(_antisym2(lambda j, k: _sum(_prod(X[i], t[i, j, k]) for i in _R)), X.chart)
    raise ConfGeoError(f"interior product not defined for {type(t).__name__}")


def pair(t: OneForm, X: VectorField) -> ScalarField:
    """<t, X> = t_i X^i."""
    return interior_product(X, t)


def sharp(P: Bivector, t: OneForm) -> VectorField:
    """P(t, .): vector with components P^{ij} t_i."""
    return VectorField([_sum(_prod(P[i, j], t[i]) for i in _R) for j in _R], P.chart)


def flat(w: TwoForm, X: VectorField) -> OneForm:
    return interior_product(X, w)


# Lie derivatives ---------------------------------------------------------------

def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^i = X^k d_k Y^i - Y^k d_k X^i."""
    return VectorField([
        _sum([_prod(X[k], diff(Y[i], k)) for k in _R] +
             [N.neg(_prod(Y[k], diff(X[i], k))) for k in _R])
        for i in _R], X.chart)


def _lie_bivector(X, P):
    def comp(i, j):
        terms = []
        for k in _R:
            terms.append(_prod(X[k], diff(P[i, j], k)))
            terms.append(N.neg(_prod(P[k, j], diff(X[i], k))))
            terms.append(N.neg(_prod(P[i, k], diff(X[j], k))))
        return _sum(terms)
    return Bivector(_antisym2(comp), P.chart)


def _lie_one_one(X, T):
    arr = np.empty((DIM, DIM), dtype=object)
    for i in _R:
        for j in _R:
            terms = []
            for k in _R:
                terms.append(_prod(X[k], diff(T[i, j], k)))
                terms.append(N.neg(_prod(T[k, j], diff(X[i], k))))
                terms.append(_prod(T[i, k], diff(X[k], j)))
            arr[i, j] = _sum(terms)
    return OneOneTensor(arr, T.chart)


def lie_derivative(X: VectorField, t):
    """L_X t for scalars, vectors, forms of degree <= 2, bivectors and (1,1)-tensors.

    Forms use Cartan's formula L_X = d iota_X + iota_X d.
    """
    if isinstance(t, (ScalarField, N.Expr, int, float)):
        return apply(X, t)
    if isinstance(t, VectorField):
        return lie_bracket(X, t)
    if isinstance(t, OneForm):
        return d(interior_product(X, t)) + interior_product(X, exterior_derivative(t))
    if isinstance(t, TwoForm):
        return exterior_derivative(interior_product(X, t)) + \
            interior_product(X, exterior_derivative(t))
    if isinstance(t, Bivector):
        return _lie_bivector(X, t)
    if isinstance(t, OneOneTensor):
        return _lie_one_one(X, t)
    raise ConfGeoError(f"Lie derivative not implemented for {type(t).__name__}")


def lie_derivative_components(X: VectorField, t):
    """Component formula for L_X of a one- or two-form (independent of Cartan)."""
    if isinstance(t, OneForm):
        return OneForm([_sum([_prod(X[k], diff(t[i], k)) for k in _R] +
                             [_prod(t[k], diff(X[k], i)) for k in _R]) for i in _R], t.chart)
    if isinstance(t, TwoForm):
        def comp(i, j):
            terms = []
            for k in _R:
                terms.append(_prod(X[k], diff(t[i, j], k)))
                terms.append(_prod(t[k, j], diff(X[k], i)))
                terms.append(_prod(t[i, k], diff(X[k], j)))
            return _sum(terms)
        return TwoForm(_antisym2(comp), t.chart)
    raise ConfGeoError(f"component Lie derivative not implemented for {type(t).__name__}")


# Schouten bracket ---------------------------------------------------------------

def schouten_bracket(P: Bivector, Q: Bivector) -> Trivector:
    """[P, Q]^{ijk} = sum over cyclic (ijk) of P^{li} d_l Q^{jk} + Q^{li} d_l P^{jk}.

    For P = Q this is twice the Jacobiator of the bracket defined by P.
    """
    def comp(i, j, k):
        terms = []
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l in _R:
                terms.append(_prod(P[l, a], diff(Q[b, c], l)))
                terms.append(_prod(Q[l, a], diff(P[b, c], l)))
        return _sum(terms)
    return Trivector(_antisym3(comp), P.chart)


def compose(T: OneOneTensor, S: OneOneTensor) -> OneOneTensor:
    """(T S)^i_j = T^i_k S^k_j."""
    arr = np.empty((DIM, DIM), dtype=object)
    for i in _R:
        for j in _R:
            arr[i, j] = _sum(_prod(T[i, k], S[k, j]) for k in _R)
    return OneOneTensor(arr, T.chart)


def trace(T: OneOneTensor) -> ScalarField:
    return ScalarField(_sum(T[i, i] for i in _R), T.chart)


def apply_tensor(T: OneOneTensor, X: VectorField) -> VectorField:
    return VectorField([_sum(_prod(T[i, j], X[j]) for j in _R) for i in _R], T.chart)


def tensor_on_form(w: TwoForm, T: OneOneTensor) -> TwoForm:
    """(w T)_ij = w_ik T^k_j."""
    return TwoForm(_antisym2(lambda i, j: _sum(_prod(w[i, k], T[k, j]) for k in _R)), w.chart)


def tensor_on_bivector(T: OneOneTensor, P: Bivector) -> Bivector:
    """(T P)^{ij} = T^j_k P^{ik}  (push the second slot through T)."""
    return Bivector(_antisym2(lambda i, j: _sum(_prod(T[j, k], P[i, k]) for k in _R)), P.chart)


def is_field(x):
    return isinstance(x, Field)
