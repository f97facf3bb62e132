"""Typed tensor fields over an 8-dimensional phase-space chart.

Components are Expr arrays stored as nested tuples.  Index placement:

    VectorField   X^i           OneForm     t_i
    TwoForm       w_ij          Bivector    P^ij     (both antisymmetric)
    ThreeForm     s_ijk         Trivector   S^ijk    (fully antisymmetric)
    OneOneTensor  T^i_j         ScalarField f
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..errors import ConfGeoError
from ..expr import nodes as N
from ..expr.chart import PHASE, Chart
from ..expr.domain import EqualityReport, scaled_residual
from ..expr.evaluate import evaluate_array

DIM = 8


def _freeze(arr):
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        return N.as_expr(arr.item())
    return tuple(_freeze(a) for a in arr)


def _object_array(components, rank):
    shape = (DIM,) * rank
    out = np.empty(shape, dtype=object)
    for idx in product(range(DIM), repeat=rank):
        c = components
        for i in idx:
            c = c[i]
        out[idx] = N.as_expr(c)
    return out


class Field:
    """Base class: an Expr array of fixed rank on a chart."""

    rank = 0
    antisymmetric = False

    def __init__(self, components, chart: Chart = PHASE):
        if self.rank == 0:
            if isinstance(components, np.ndarray):
                components = components.reshape(()).item()
            arr = np.empty((), dtype=object)
            arr[()] = N.as_expr(components)
        else:
            arr = np.asarray(components, dtype=object)
            if arr.shape != (DIM,) * self.rank:
                arr = _object_array(components, self.rank)
            arr = np.vectorize(N.as_expr, otypes=[object])(arr)
        if self.antisymmetric:
            _check_antisymmetric(arr, type(self).__name__)
        self._arr = arr
        self.chart = chart

    @property
    def array(self):
        """Object ndarray of components (a copy)."""
        return self._arr.copy()

    @property
    def components(self):
        return _freeze(self._arr)

    def __getitem__(self, idx):
        return self._arr[idx]

    def _new(self, arr):
        return type(self)(arr, self.chart)

    def __add__(self, other):
        _same_type(self, other)
        return self._new(_zip(N.add, self._arr, other._arr))

    def __sub__(self, other):
        _same_type(self, other)
        return self._new(_zip(N.sub, self._arr, other._arr))

    def __neg__(self):
        return self._new(np.vectorize(N.neg, otypes=[object])(self._arr))

    def scale(self, factor):
        factor = N.as_expr(factor)
        return self._new(np.vectorize(lambda e: N.mul(factor, e), otypes=[object])(self._arr))

    def is_zero(self):
        return all(e.is_zero() for e in self._arr.ravel())

    def nonzero(self):
        """(index, Expr) pairs of structurally nonzero components."""
        if self.rank == 0:
            return [] if self._arr[()].is_zero() else [((), self._arr[()])]
        return [(idx, e) for idx, e in np.ndenumerate(self._arr) if not e.is_zero()]

    def evaluate(self, points, alpha):
        """Numeric components, shape (n,) + component shape."""
        vals = evaluate_array(self._arr, points, alpha)
        return np.moveaxis(vals, -1, 0)

    def __repr__(self):
        from ..expr.printer import to_string
        body = ", ".join(f"{idx}: {to_string(e, self.chart)}" for idx, e in self.nonzero()[:6])
        more = "" if len(self.nonzero()) <= 6 else ", ..."
        return f"{type(self).__name__}({{{body}{more}}})"


def _zip(op, a, b):
    out = np.empty(a.shape, dtype=object)
    for idx in np.ndindex(a.shape):
        out[idx] = op(a[idx], b[idx])
    return out


def _same_type(a, b):
    if type(a) is not type(b):
        raise ConfGeoError(f"cannot combine {type(a).__name__} with {type(b).__name__}")


def _check_antisymmetric(arr, what):
    r = arr.ndim
    if r == 2:
        pairs = [((i, j), (j, i)) for i in range(DIM) for j in range(i, DIM)]
    else:
        pairs = [((i, j, k), (j, i, k)) for i, j, k in product(range(DIM), repeat=3)]
        pairs += [((i, j, k), (i, k, j)) for i, j, k in product(range(DIM), repeat=3)]
    for a, b in pairs:
        if arr[a] is not N.neg(arr[b]) and not (arr[a].is_zero() and arr[b].is_zero()):
            raise ConfGeoError(f"{what} components are not antisymmetric at {a}")


class ScalarField(Field):
    rank = 0

    @property
    def expr(self):
        return self._arr[()]


class VectorField(Field):
    rank = 1


class OneForm(Field):
    rank = 1


class TwoForm(Field):
    rank = 2
    antisymmetric = True


class Bivector(Field):
    rank = 2
    antisymmetric = True


class ThreeForm(Field):
    rank = 3
    antisymmetric = True


class Trivector(Field):
    rank = 3
    antisymmetric = True


class OneOneTensor(Field):
    """T^i_j, stored as T[i][j]."""

    rank = 2


def as_scalar(f, chart=PHASE):
    if isinstance(f, ScalarField):
        return f
    if isinstance(f, Field):
        raise ConfGeoError(f"expected a scalar field, got {type(f).__name__}")
    return ScalarField(f, chart)


def block_matrix(coeffs, cls, chart=PHASE):
    """Antisymmetric matrix with entry [4+m][m] = coeffs[m] (the (p_m, q_m) slot).

    For a TwoForm this is  sum_m c_m dp_m ^ dq_m ; for a Bivector it is
    sum_m c_m d/dp_m ^ d/dq_m.
    """
    arr = np.full((DIM, DIM), N.ZERO, dtype=object)
    for m, c in enumerate(coeffs):
        c = N.as_expr(c)
        arr[4 + m, m] = c
        arr[m, 4 + m] = N.neg(c)
    return cls(arr, chart)


def diagonal_tensor(entries, chart=PHASE):
    arr = np.full((DIM, DIM), N.ZERO, dtype=object)
    for i, e in enumerate(entries):
        arr[i, i] = N.as_expr(e)
    return OneOneTensor(arr, chart)


def identity_tensor(chart=PHASE):
    return diagonal_tensor([N.ONE] * DIM, chart)


@dataclass
class FieldReport(EqualityReport):
    worst_component: tuple = ()


def field_equal(a, b, box=None, n=100, tol=1e-9, seed=0, alpha=0.7, points=None) -> FieldReport:
    """Componentwise numeric comparison of two fields of the same type.

    ``b`` may also be 0 (compare against the zero field).
    """
    if isinstance(b, (int, float)) and b == 0:
        b = type(a)(np.full(a._arr.shape, N.ZERO, dtype=object), a.chart)
    _same_type(a, b)
    pts = box.sample(n, seed) if points is None else np.asarray(points, dtype=float)
    va = a.evaluate(pts, alpha)
    vb = b.evaluate(pts, alpha)
    res = scaled_residual(va, vb)
    flat = int(np.argmax(res))
    where = np.unravel_index(flat, res.shape)
    worst = float(res[where])
    return FieldReport(
        equal=bool(worst <= tol),
        max_residual=worst,
        worst_point=tuple(float(x) for x in pts[where[0]]),
        worst_values=(float(va[where]), float(vb[where])),
        n=len(pts),
        tol=tol,
        residuals=res.reshape(len(pts), -1).max(axis=1),
        worst_component=tuple(int(i) for i in where[1:]),
    )
