"""Suites for the model recursion operator and the Minkowski pair."""

from __future__ import annotations

from ..expr.domain import PHASE_BOX, DomainBox
from ..poisson.builtins import builtin
from ..poisson.calculus import lie_derivative
from .hierarchy import _field_check, torsion_check
from .operators import (
    lemma_field, lemma_tensor, minkowski_recursion, minkowski_recursion_display,
    minkowski_trace_display, trace_power,
)

# both sign sectors of every coordinate, away from the |x|^(alpha-1) singularities
MIXED_BOX = DomainBox(((-3, -0.5), (0.5, 3), (-3, -0.5), (0.5, 3),
                       (0.2, 2), (-2, -0.2), (-2, -0.2), (0.2, 2)))


def lemma1_suite(alpha=0.7, n=100, seed=0, tol=1e-10, boxes=(PHASE_BOX, MIXED_BOX)):
    """N_T = 0 and L_{X_i} T = 0 for the model operator, i = 1..4."""
    T = lemma_tensor()
    out = []
    for b, tag in zip(boxes, ("positive", "mixed")):
        out.append(torsion_check(f"N_T = 0 ({tag})", T, b, n, seed, alpha, tol))
        for i in range(1, 5):
            out.append(_field_check(f"L_X{i} T = 0 ({tag})", lie_derivative(lemma_field(i), T), 0,
                                    b, n, seed, alpha, tol))
    return out


def minkowski_recursion_suite(alpha=0.7, n=100, seed=0, tol=1e-9, max_power=4, box=PHASE_BOX):
    """T_alpha against its displayed diagonal; invariance of T_alpha and Tr(T_alpha^h) under X_alpha."""
    T = minkowski_recursion()
    X = builtin("X_alpha_display")
    out = [
        _field_check("T_alpha = displayed diagonal", T, minkowski_recursion_display(), box, n, seed, alpha, tol),
        _field_check("L_X T_alpha = 0", lie_derivative(X, T), 0, box, n, seed, alpha, tol),
        torsion_check("N_{T_alpha} = 0", T, box, n, seed, alpha, tol),
    ]
    for h in range(1, max_power + 1):
        out.append(_field_check(f"L_X Tr(T_alpha^{h}) = 0", lie_derivative(X, trace_power(T, h)), 0,
                                box, n, seed, alpha, tol))
    # the displayed closed form only agrees for h = 1 (see README)
    out.append(_field_check("Tr(T_alpha) = displayed trace", trace_power(T, 1), minkowski_trace_display(1),
                            box, n, seed, alpha, tol))
    return out
