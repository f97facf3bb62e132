import numpy as np
import pytest
import sympy as sp

from confgeo.errors import ConfGeoError
from confgeo.expr import PHASE, PHASE_BOX, evaluate_points, numeric_equal, parse
from confgeo.expr import nodes as N
from confgeo.poisson.bracket import ALPHA, PoissonStructure
from confgeo.poisson.builtins import (
    builtin, flrw_box, flrw_field_display, flrw_hamiltonian, schwarzschild_box,
    schwarzschild_field_display, schwarzschild_hamiltonian,
)
from confgeo.poisson.calculus import d, interior_product, lie_bracket, lie_derivative, schouten_bracket
from confgeo.poisson.suites import (
    bihamiltonian_suite, jacobi_suite, morphism_suite, noether_suite, nondegeneracy_suite,
    perturbed_second_bivector, polynomial_corpus, schouten_suite,
)
from confgeo.poisson.tensors import ScalarField, VectorField, field_equal

Q = sp.symbols("q1:5", positive=True)
P = sp.symbols("p1:5", positive=True)
A = sp.Symbol("alpha", positive=True)


def sym_bracket(f, g):
    """The alpha-bracket written out in sympy."""
    return sum(A ** -2 * P[m] ** (1 - A) * Q[m] ** (1 - A)
               * (sp.diff(f, P[m]) * sp.diff(g, Q[m]) - sp.diff(f, Q[m]) * sp.diff(g, P[m]))
               for m in range(4))


def sym_eval(expr, pts, alpha):
    f = sp.lambdify((Q + P, A), expr, "numpy")
    return np.array([float(f(tuple(x), alpha)) for x in pts])


def s(text):
    return ScalarField(parse(text, PHASE))


# bracket -------------------------------------------------------------------------------

def test_bracket_examples():
    w = parse("alpha^(-2)*abs(p1)^(1-alpha)*abs(q1)^(1-alpha)", PHASE)
    assert numeric_equal(ALPHA(s("p1"), s("q1")).expr, w, PHASE_BOX, tol=1e-14).equal
    assert ALPHA(s("q1"), s("q2")).expr.is_zero()
    f = s("q1*p2 + sin(p3)")
    assert ALPHA(f, f).expr.is_zero()
    pts = PHASE_BOX.sample(20, 0)
    for m in range(4):
        for n in range(4):
            v = evaluate_points(ALPHA(s(f"p{m + 1}"), s(f"q{n + 1}")).expr, pts, 1.0)
            assert np.all(v == (1.0 if m == n else 0.0))


def test_bracket_against_sympy():
    pts = PHASE_BOX.sample(20, 1)
    texts = ["q1*p1^2 + q2", "sin(q3)*p4 - p2*q1", "q2^3*p3 + p1*p2*q4", "exp(q1/3)*p1 + q4^2"]
    for i, ft in enumerate(texts):
        for gt in texts[i + 1:]:
            ours = ALPHA(s(ft), s(gt)).expr
            sf = sp.sympify(ft.replace("^", "**"), locals=dict(zip(["q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"],
                                                                  Q + P)))
            sg = sp.sympify(gt.replace("^", "**"), locals=dict(zip(["q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"],
                                                                  Q + P)))
            for a in (0.5, 0.7):
                assert np.allclose(evaluate_points(ours, pts, a), sym_eval(sym_bracket(sf, sg), pts, a),
                                   rtol=1e-11, atol=1e-12)


def test_hamiltonian_vector_field_is_bracket_on_coordinates():
    H = schwarzschild_hamiltonian(1)
    X = ALPHA.hamiltonian_vector_field(H)
    box = schwarzschild_box(1)
    for i, name in enumerate(PHASE.names):
        assert numeric_equal(X[i], ALPHA(H, s(name)).expr, box, tol=1e-12).equal
    assert field_equal(ALPHA.hamiltonian_vector_field(ScalarField(N.const(3))), 0, box=PHASE_BOX).equal


def test_minkowski_field_display():
    X = builtin("X_alpha_display")
    coeff = parse("((alpha - 1)/(alpha + 1))*p1^2/q1", PHASE)
    assert numeric_equal(X[4], coeff, PHASE_BOX, tol=1e-13).equal
    for a in (0.5, 0.7, 1.0):
        assert field_equal(ALPHA.hamiltonian_vector_field(builtin("H_alpha")), X, alpha=a, box=PHASE_BOX).equal


def test_free_particle_limit():
    H = builtin("H_alpha")
    assert numeric_equal(H.expr, parse("-p1^2/2 + (p2^2 + p3^2 + p4^2)/2", PHASE), PHASE_BOX,
                         tol=1e-14, alpha=1.0).equal


def test_schwarzschild_display_matches():
    for a in (0.5, 0.7, 1.0):
        r = field_equal(ALPHA.hamiltonian_vector_field(schwarzschild_hamiltonian(1)), schwarzschild_field_display(1),
                        box=schwarzschild_box(1), alpha=a)
        assert r.equal, r.max_residual


def test_flrw_display_discrepancy_is_localised():
    X = ALPHA.hamiltonian_vector_field(flrw_hamiltonian(1, "q1^2"))
    box = flrw_box(1)
    printed = flrw_field_display(1, "q1^2")
    bad = [i for i in range(8) if not numeric_equal(X[i], printed[i], box, tol=1e-9).equal]
    assert bad == [0, 1, 4, 5]
    assert field_equal(X, flrw_field_display(1, "q1^2", corrected=True), box=box).equal


# calculus ----------------------------------------------------------------------------

def test_lie_derivative_basics():
    dq1 = VectorField([N.ONE] + [N.ZERO] * 7)
    assert lie_derivative(dq1, s("q1")).expr is N.ONE
    w = builtin("omega_alpha")
    assert field_equal(interior_product(VectorField([N.ZERO] * 8), w), 0, box=PHASE_BOX).equal
    L = builtin("L_alpha")
    ref = s("(1/2)*(p1^(-1)*q1^((1-alpha)/(1+alpha)) + p2^(-1)*q2^((1-alpha)/(1+alpha)) "
            "+ p3^(-1)*q3^((1-alpha)/(1+alpha)) + p4^(-1)*q4^((1-alpha)/(1+alpha)))")
    assert field_equal(L, ref, box=PHASE_BOX).equal
    assert field_equal(lie_derivative(builtin("Y_alpha"), builtin("H_alpha")), ref, box=PHASE_BOX).equal


def test_cartan_formula_against_component_formula():
    # L_X w = d iota_X w + iota_X dw, against the coordinate expression X^k d_k w_ij + w_kj d_i X^k + w_ik d_j X^k
    from confgeo.expr.calculus import diff
    X = ALPHA.hamiltonian_vector_field(s("q1*p2^2 + sin(q3)*p1"))
    w = builtin("omega_alpha1")
    L = lie_derivative(X, w)
    pts = PHASE_BOX.sample(20, 3)
    ours = L.evaluate(pts, 0.7)
    comp = np.empty((8, 8), dtype=object)
    for i in range(8):
        for j in range(8):
            terms = [N.mul(X[k], diff(w[i, j], k)) for k in range(8)]
            terms += [N.mul(w[k, j], diff(X[k], i)) for k in range(8)]
            terms += [N.mul(w[i, k], diff(X[k], j)) for k in range(8)]
            comp[i, j] = N.sum_exprs(terms)
    from confgeo.expr import evaluate_array
    ref = np.moveaxis(evaluate_array(comp, pts, 0.7), -1, 0)
    assert np.allclose(ours, ref, rtol=1e-10, atol=1e-10)


def test_schouten_against_sympy_for_a_non_poisson_bivector():
    """[P, P] of a coupled bivector computed with the cyclic coordinate formula in sympy."""
    Pp = perturbed_second_bivector()
    ours = schouten_bracket(Pp, Pp)
    X = Q + P
    pts = PHASE_BOX.sample(5, 0)
    a = 0.7
    Pn = Pp.evaluate(pts, a)
    # numeric reference: [P,P]^{ijk} = 2 * cyclic sum_l P^{li} d_l P^{jk}, derivatives by sympy
    syms = sp.Matrix(8, 8, lambda i, j: sp.sympify(0))
    from confgeo.expr.printer import to_string
    for (i, j), e in Pp.nonzero():
        syms[i, j] = sp.sympify(to_string(e, PHASE).replace("^", "**"),
                                locals={**dict(zip(PHASE.names, X)), "alpha": A, "abs": sp.Abs})
    dP = [[[sp.lambdify((X, A), sp.diff(syms[j, k], X[l]), "numpy") for l in range(8)]
           for k in range(8)] for j in range(8)]
    ref = np.zeros((len(pts), 8, 8, 8))
    for n, x in enumerate(pts):
        D = np.array([[[float(dP[j][k][l](tuple(x), a)) for l in range(8)] for k in range(8)] for j in range(8)])
        for i in range(8):
            for j in range(8):
                for k in range(8):
                    ref[n, i, j, k] = sum(Pn[n, l, i] * D[j, k, l] + Pn[n, l, j] * D[k, i, l] + Pn[n, l, k] * D[i, j, l]
                                          for l in range(8))
    ours_v = ours.evaluate(pts, a)
    scale = np.max(np.abs(ref))
    assert scale > 1e-3
    # with P = Q both halves of the formula coincide
    assert np.allclose(ours_v, 2 * ref, atol=1e-10 * scale)


# suites ------------------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.5, 0.7, 1.0])
def test_prop1_and_morphism(alpha):
    for c in jacobi_suite(alpha) + morphism_suite(alpha):
        assert c.ok, (c.name, c.max_residual)


def test_corpus_is_seeded_and_has_degree_at_most_three():
    a, b = polynomial_corpus(5), polynomial_corpus(5)
    assert all(x.expr is y.expr for ta, tb in zip(a, b) for x, y in zip(ta, tb))
    assert len(a) == 25
    # degree <= 3: every fourth-order partial vanishes
    from itertools import combinations_with_replacement
    from confgeo.expr.calculus import diff
    pts = PHASE_BOX.sample(3, 0)
    for triple in a[:5]:
        for f in triple:
            for idx in combinations_with_replacement(range(8), 4):
                e = f.expr
                for i in idx:
                    e = diff(e, i)
                assert e.is_zero() or np.all(evaluate_points(e, pts, 0.7) == 0)


@pytest.mark.parametrize("alpha", [0.5, 0.7, 1.0])
def test_noether_bihamiltonian_schouten(alpha):
    for c in noether_suite(alpha) + bihamiltonian_suite(alpha) + schouten_suite(alpha) + nondegeneracy_suite(alpha):
        assert c.ok, (c.name, c.max_residual)


def test_perturbed_bivector_is_detected():
    r = field_equal(schouten_bracket(builtin("P_alpha"), perturbed_second_bivector()), 0, box=PHASE_BOX)
    assert not r.equal and r.max_residual > 1e-3
    r = field_equal(schouten_bracket(perturbed_second_bivector(), perturbed_second_bivector()), 0, box=PHASE_BOX)
    assert not r.equal


def test_constant_block_rescaling_is_not_a_valid_negative_control():
    # scaling one block by a constant keeps the pair compatible; this is why the control is q-dependent
    Pc = perturbed_second_bivector(N.const(1.1))
    assert field_equal(schouten_bracket(builtin("P_alpha"), Pc), 0, box=PHASE_BOX).equal


def test_unknown_builtin():
    with pytest.raises(ConfGeoError, match="unknown builtin"):
        builtin("nope")


def test_custom_structure_bracket_matches_alpha_at_alpha_one():
    canon = PoissonStructure.from_weights([N.ONE] * 4)
    f, g = s("q1*p1^2 + q2*p3"), s("sin(q4)*p2 + p1*q3")
    assert numeric_equal(canon(f, g).expr, ALPHA(f, g).expr, PHASE_BOX, alpha=1.0, tol=1e-14).equal
    assert d(f)[0] is not None
    XX = lie_bracket(ALPHA.hamiltonian_vector_field(f), ALPHA.hamiltonian_vector_field(f))
    assert np.abs(XX.evaluate(PHASE_BOX.sample(5, 0), 0.7)).max() < 1e-12
