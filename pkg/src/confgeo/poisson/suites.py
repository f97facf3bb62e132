"""Property suites for the alpha-bracket and the Minkowski builtins."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..checks import Check, from_report
from ..expr import nodes as N
from ..expr.domain import PHASE_BOX, scaled_residual
from ..expr.evaluate import evaluate_many
from .bracket import ALPHA, PoissonStructure
from .builtins import builtin
from .calculus import d, interior_product, lie_bracket, lie_derivative, schouten_bracket
from .tensors import ScalarField, field_equal


def random_polynomial(rng, max_degree=3, terms=4, dim=8):
    """Sum of ``terms`` monomials of total degree <= max_degree with small rational coefficients."""
    out = []
    for _ in range(terms):
        deg = int(rng.integers(0, max_degree + 1))
        idx = rng.integers(0, dim, size=deg)
        c = Fraction(int(rng.integers(1, 10)) * int(rng.choice([-1, 1])), int(rng.integers(1, 5)))
        mono = N.prod_exprs([N.coord(int(i)) for i in idx]) if deg else N.ONE
        out.append(N.mul(N.const(c), mono))
    return ScalarField(N.sum_exprs(out))


def polynomial_corpus(seed, count=25, max_degree=3):
    rng = np.random.default_rng(seed)
    return [tuple(random_polynomial(rng, max_degree) for _ in range(3)) for _ in range(count)]


def _cyclic_residual(terms, pts, alpha):
    """max over points of |sum terms| / (1 + max |term|)."""
    vals = evaluate_many(tuple(t.expr for t in terms), pts, alpha)
    res = np.abs(vals.sum(axis=0)) / (1.0 + np.abs(vals).max(axis=0))
    j = int(np.argmax(res))
    return float(res[j]), tuple(float(x) for x in pts[j])


def _worst(name, pairs, tol):
    r, pt = max(pairs, key=lambda t: t[0]) if pairs else (0.0, ())
    return Check(name, r, pt, tol)


def jacobi_suite(alpha=0.7, seed=0, count=25, n=20, structure: PoissonStructure = None, box=PHASE_BOX,
                 tol=1e-8, antisymmetry_tol=1e-14):
    """Antisymmetry, Jacobi identity and Leibniz rule over a random polynomial corpus."""
    P = structure or ALPHA
    pts = box.sample(n, seed)
    anti, jac, leib = [], [], []
    for f, g, h in polynomial_corpus(seed, count):
        anti.append(_cyclic_residual([P(f, g), P(g, f)], pts, alpha))
        jac.append(_cyclic_residual([P(f, P(g, h)), P(g, P(h, f)), P(h, P(f, g))], pts, alpha))
        gh = ScalarField(N.mul(g.expr, h.expr))
        leib.append(_cyclic_residual([
            P(f, gh),
            ScalarField(N.neg(N.mul(g.expr, P(f, h).expr))),
            ScalarField(N.neg(N.mul(P(f, g).expr, h.expr))),
        ], pts, alpha))
    return [
        _worst("antisymmetry {f,g} + {g,f}", anti, antisymmetry_tol),
        _worst("Jacobi {f,{g,h}} + cyclic", jac, tol),
        _worst("Leibniz {f,gh} = g{f,h} + {f,g}h", leib, tol),
    ]


def morphism_suite(alpha=0.7, seed=0, count=25, n=20, structure: PoissonStructure = None, box=PHASE_BOX,
                   tol=1e-8):
    """[X_f, X_g] = X_{f,g} on the polynomial corpus."""
    P = structure or ALPHA
    pts = box.sample(n, seed)
    worst = (0.0, ())
    for f, g, _ in polynomial_corpus(seed, count):
        lhs = lie_bracket(P.hamiltonian_vector_field(f), P.hamiltonian_vector_field(g))
        rhs = P.hamiltonian_vector_field(P(f, g))
        a = lhs.evaluate(pts, alpha)
        b = rhs.evaluate(pts, alpha)
        res = scaled_residual(a, b).max(axis=1)
        j = int(np.argmax(res))
        if res[j] >= worst[0]:
            worst = (float(res[j]), tuple(float(x) for x in pts[j]))
    return [Check("[X_f, X_g] = X_{f,g}", worst[0], worst[1], tol)]


def _fc(name, a, b, alpha, n, seed, tol, box=PHASE_BOX):
    return from_report(name, field_equal(a, b, box=box, n=n, tol=tol, seed=seed, alpha=alpha), tol)


def noether_suite(alpha=0.7, n=100, seed=0, tol=1e-9):
    X = builtin("X_alpha_display")
    X1 = builtin("X_alpha1_display")
    Y = builtin("Y_alpha")
    w = builtin("omega_alpha")
    H = builtin("H_alpha")
    L = builtin("L_alpha")
    return [
        _fc("X_alpha = {H_alpha, .}", ALPHA.hamiltonian_vector_field(H), X, alpha, n, seed, tol),
        _fc("L_{X_alpha1} omega_alpha = 0", lie_derivative(X1, w), 0, alpha, n, seed, tol),
        _fc("L_{X_alpha1} H_alpha = 0", lie_derivative(X1, H), 0, alpha, n, seed, tol),
        _fc("[X_alpha, X_alpha1] = 0", lie_bracket(X, X1), 0, alpha, n, seed, tol),
        _fc("iota_{X_alpha1} omega_alpha + dL_alpha = 0", interior_product(X1, w) + d(L), 0,
            alpha, n, seed, tol),
        _fc("X_alpha1 = [X_alpha, Y_alpha]", lie_bracket(X, Y), X1, alpha, n, seed, tol),
        _fc("L_{Y_alpha} H_alpha = L_alpha", lie_derivative(Y, H), L, alpha, n, seed, tol),
        _fc("[[Y_alpha, X_alpha], X_alpha] = 0", lie_bracket(lie_bracket(Y, X), X), 0, alpha, n, seed, tol),
    ]


def bihamiltonian_suite(alpha=0.7, n=100, seed=0, tol=1e-9):
    X = builtin("X_alpha_display")
    w, w1 = builtin("omega_alpha"), builtin("omega_alpha1")
    H, Lt = builtin("H_alpha"), builtin("L_tilde")
    P1 = PoissonStructure(builtin("P_alpha1"), "P_alpha1")
    return [
        _fc("iota_{X_alpha} omega_alpha + dH_alpha = 0", interior_product(X, w) + d(H), 0,
            alpha, n, seed, tol),
        _fc("iota_{X_alpha} omega_alpha1 + dL~ = 0", interior_product(X, w1) + d(Lt), 0,
            alpha, n, seed, tol),
        _fc("X_alpha = {L~, .}_alpha1", P1.hamiltonian_vector_field(Lt), X, alpha, n, seed, tol),
        _fc("omega_alpha1 = L_{Y_alpha} omega_alpha", lie_derivative(builtin("Y_alpha"), w), w1,
            alpha, n, seed, tol),
        _fc("[P_alpha, P_alpha1] = 0", schouten_bracket(builtin("P_alpha"), builtin("P_alpha1")), 0,
            alpha, n, seed, tol),
    ]


def schouten_suite(alpha=0.7, n=100, seed=0, tol=1e-9):
    P, P1 = builtin("P_alpha"), builtin("P_alpha1")
    return [
        _fc("[P_alpha, P_alpha] = 0", schouten_bracket(P, P), 0, alpha, n, seed, tol),
        _fc("[P_alpha1, P_alpha1] = 0", schouten_bracket(P1, P1), 0, alpha, n, seed, tol),
        _fc("[P_alpha, P_alpha1] = 0", schouten_bracket(P, P1), 0, alpha, n, seed, tol),
    ]


def perturbed_second_bivector(factor=None):
    """Negative control: the (p1, q1) block of P_alpha1 times (1 + q2/10), which couples blocks."""
    P1 = builtin("P_alpha1")
    arr = P1.array
    f = factor if factor is not None else N.add(N.ONE, N.div(N.coord(1), N.const(10)))
    arr[4, 0] = N.mul(f, arr[4, 0])
    arr[0, 4] = N.neg(arr[4, 0])
    return type(P1)(arr, P1.chart)


def nondegeneracy_suite(alpha=0.7, n=100, seed=0, tol=1e-12, forms=5):
    """t -> P(., t) -> iota omega returns t, for (P_alpha, omega_alpha) and (P_alpha1, omega_alpha1).

    P(., t) is the second-slot contraction; with the first slot (the X_H convention) the
    composite is -1 instead.
    """
    rng = np.random.default_rng(seed)
    pts = PHASE_BOX.sample(n, seed)
    out = []
    for pname, wname in (("P_alpha", "omega_alpha"), ("P_alpha1", "omega_alpha1")):
        P = builtin(pname).evaluate(pts, alpha)
        w = builtin(wname).evaluate(pts, alpha)
        worst = (0.0, ())
        for _ in range(forms):
            t = rng.normal(size=(n, 8))
            X = np.einsum("nji,ni->nj", P, t)             # X^j = P^{ji} t_i
            back = np.einsum("nj,njk->nk", X, w)          # (iota_X w)_k = X^j w_jk
            res = scaled_residual(back, t).max(axis=1)
            j = int(np.argmax(res))
            if res[j] >= worst[0]:
                worst = (float(res[j]), tuple(float(x) for x in pts[j]))
        out.append(Check(f"{wname} o {pname} = 1 on one-forms", worst[0], worst[1], tol))
    return out
