import math
import random

import numpy as np
import pytest
import sympy as sp

from confgeo.errors import DomainError, ParseError
from confgeo.expr import (
    ALPHA_NODE, CONFIG, ONE, PHASE, PHASE_BOX, TWO, DomainBox, abs_, alpha_add, alpha_div,
    alpha_mul, alpha_partial, alpha_sub, coord, diff, div, evaluate, evaluate_points, g, g_inv,
    mul, numeric_equal, parse, power, sub, to_string,
)
from confgeo.expr import nodes as N

Q = sp.symbols("q1:5", positive=True)
P = sp.symbols("p1:5", positive=True)
XS = Q + P
A = sp.Symbol("alpha", positive=True)


def random_pair(rng, depth):
    """The same random expression as a confgeo DAG and as a sympy tree."""
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.6:
            i = rng.randrange(8)
            return N.coord(i), XS[i]
        if r < 0.8:
            c = rng.randint(1, 5)
            return N.const(c), sp.Integer(c)
        return ALPHA_NODE, A
    op = rng.choice(["add", "sub", "mul", "div", "pow", "sin", "cos", "exp", "ln", "abspow"])
    a, sa = random_pair(rng, depth - 1)
    if op in ("sin", "cos", "exp"):
        return getattr(N, op)(a), getattr(sp, op)(sa)
    if op == "ln":
        # keep the argument positive: ln(1 + a^2)
        arg = N.add(ONE, N.power(a, TWO))
        return N.ln(arg), sp.log(1 + sa ** 2)
    if op == "abspow":
        i = rng.randrange(8)
        return (N.mul(a, N.power(abs_(N.coord(i)), sub(ALPHA_NODE, ONE))),
                sa * sp.Abs(XS[i]) ** (A - 1))
    b, sb = random_pair(rng, depth - 1)
    if op == "add":
        return N.add(a, b), sa + sb
    if op == "sub":
        return N.sub(a, b), sa - sb
    if op == "mul":
        return N.mul(a, b), sa * sb
    if op == "div":
        return N.div(a, N.add(TWO, N.power(b, TWO))), sa / (2 + sb ** 2)
    return N.power(N.add(ONE, N.power(a, TWO)), b), (1 + sa ** 2) ** sb


def corpus(n=40, depth=4, seed=1):
    rng = random.Random(seed)
    return [random_pair(rng, depth) for _ in range(n)]


def sympy_values(se, pts, alpha):
    f = sp.lambdify((XS, A), se, "math")
    return np.array([f(tuple(p), alpha) for p in pts], dtype=float)


# parse / print --------------------------------------------------------------------

def test_parse_examples():
    assert parse("(alpha - 1)/q1", CONFIG) is div(sub(ALPHA_NODE, ONE), coord(0))
    assert parse("abs(q1)^(2*(alpha-1))", CONFIG) is power(abs_(coord(0)), mul(TWO, sub(ALPHA_NODE, ONE)))


@pytest.mark.parametrize("text", ["sin(q3)*cos(q3)", "-q1^2^3", "q1 - (q2 - q3)", "1/(q1*q2)/q3",
                                  "-(alpha - 1)*abs(q2)^(alpha - 1)", "exp(ln(q1)) + tan(q2)*cot(q3)"])
def test_round_trip_examples(text):
    e = parse(text, PHASE)
    assert parse(to_string(e, PHASE), PHASE) is e


def test_round_trip_corpus():
    for e, _ in corpus(60):
        assert parse(to_string(e, PHASE), PHASE) is e


def test_parse_errors_carry_location():
    with pytest.raises(ParseError) as ex:
        parse("q1 + foo", CONFIG)
    assert ex.value.line == 1 and ex.value.column == 6
    with pytest.raises(ParseError, match="arity"):
        parse("sin(q1, q2)", CONFIG)
    with pytest.raises(ParseError):
        parse("q1 +", CONFIG)
    with pytest.raises(ParseError) as ex:
        parse("q1 +\n (q2 * )", CONFIG)
    assert ex.value.line == 2


def test_parameters_substitute():
    e = parse("2*M/q2", CONFIG, {"M": 3})
    assert evaluate(e, [1, 2, 1, 1], 0.7) == pytest.approx(3.0)


# evaluation -------------------------------------------------------------------------

def test_eval_example():
    assert evaluate(parse("(alpha - 1)/q1", CONFIG), [2, 1, 1, 1], 0.7) == pytest.approx(-0.15, rel=1e-14)


def test_alpha_one_collapses_abs_powers():
    e = parse("abs(q1)^(alpha - 1) * abs(q2)^(2*(alpha - 1))", CONFIG)
    pts = DomainBox.uniform(4, 0.1, 9).sample(20, 0)
    assert np.all(evaluate_points(e, pts, 1.0) == 1.0)


def test_polynomial_matches_straight_line_evaluator():
    rng = np.random.default_rng(3)
    coef = rng.normal(size=(6,))
    idx = rng.integers(0, 8, size=(6, 3))
    e = N.sum_exprs(N.mul(N.const(float(c)), N.prod_exprs([N.coord(int(i)) for i in row]))
                    for c, row in zip(coef, idx))
    pts = PHASE_BOX.sample(100, 0)
    ours = evaluate_points(e, pts, 0.7)
    ref = np.array([sum(c * x[r[0]] * x[r[1]] * x[r[2]] for c, r in zip(coef, idx)) for x in pts])
    assert np.max(np.abs(ours - ref) / (1 + np.abs(ref))) < 1e-14


def test_eval_against_sympy():
    pts = PHASE_BOX.sample(25, 4)
    for e, se in corpus(30):
        for a in (0.5, 0.7, 1.0):
            ours = evaluate_points(e, pts, a)
            ref = sympy_values(se, pts, a)
            assert np.allclose(ours, ref, rtol=1e-11, atol=1e-12)


def test_eval_is_pure():
    e, _ = corpus(1, seed=9)[0]
    pts = PHASE_BOX.sample(10, 0)
    assert np.array_equal(evaluate_points(e, pts, 0.7), evaluate_points(e, pts, 0.7))


def test_domain_errors_name_subexpression():
    with pytest.raises(DomainError) as ex:
        evaluate(parse("q2 + 1/q1", CONFIG), [0, 1, 1, 1], 0.7)
    assert "1/q1" in str(ex.value) and ex.value.point is not None
    with pytest.raises(DomainError):
        evaluate(parse("ln(q1 - 2)", CONFIG), [1, 1, 1, 1], 0.7)
    # abs at exactly zero is outside the open domain
    with pytest.raises(DomainError):
        evaluate(parse("abs(q1)^(alpha - 1)", CONFIG), [0, 1, 1, 1], 0.7)


def test_sign_at_zero_is_zero_when_lenient():
    v = evaluate(parse("sign(q1)", CONFIG), [0, 1, 1, 1], 0.7, strict=False)
    assert v == 0


# differentiation ----------------------------------------------------------------------

def test_diff_against_sympy():
    pts = PHASE_BOX.sample(15, 5)
    for e, se in corpus(30):
        for i in (0, 3, 5):
            ours = evaluate_points(diff(e, i), pts, 0.7)
            ref = sympy_values(sp.diff(se, XS[i]), pts, 0.7)
            assert np.allclose(ours, ref, rtol=1e-9, atol=1e-10)


def test_diff_matches_finite_difference():
    e = mul(power(abs_(coord(0)), sub(ALPHA_NODE, ONE)), coord(0))
    x = np.array([2.0, 1, 1, 1, 1, 1, 1, 1])
    h = 1e-6
    fd = (evaluate(e, x + [h, 0, 0, 0, 0, 0, 0, 0], 0.7) - evaluate(e, x - [h, 0, 0, 0, 0, 0, 0, 0], 0.7)) / (2 * h)
    ex = evaluate(diff(e, 0), x, 0.7)
    assert abs(ex - fd) / abs(ex) < 1e-7


def test_diff_rules():
    assert diff(N.const(5), 2).is_zero()
    pts = PHASE_BOX.sample(30, 1)
    for (f, _), (h, _) in zip(corpus(10, seed=2), corpus(10, seed=3)):
        prod = numeric_equal(diff(N.mul(f, h), 1), N.add(N.mul(f, diff(h, 1)), N.mul(h, diff(f, 1))),
                             PHASE_BOX, tol=1e-10, points=pts)
        assert prod.equal, prod.max_residual
        lin = numeric_equal(diff(N.add(N.mul(N.const(3), f), N.mul(N.const(-2), h)), 4),
                            N.sub(N.mul(N.const(3), diff(f, 4)), N.mul(N.const(2), diff(h, 4))),
                            PHASE_BOX, tol=1e-12, points=pts)
        assert lin.equal
        den = N.add(TWO, N.power(h, TWO))
        quot = numeric_equal(diff(N.div(f, den), 2),
                             N.div(N.sub(N.mul(den, diff(f, 2)), N.mul(f, diff(den, 2))), N.power(den, TWO)),
                             PHASE_BOX, tol=1e-10, points=pts)
        assert quot.equal


def test_alpha_partial():
    x = coord(1)
    e = alpha_partial(power(x, N.const(3)), 1)
    ref = parse("alpha*3*abs(q2)^(alpha - 1)*q2^2", PHASE)
    assert numeric_equal(e, ref, PHASE_BOX, tol=1e-12).equal
    assert evaluate(e, [1, 2, 1, 1, 1, 1, 1, 1], 1.0) == pytest.approx(12.0)
    assert alpha_partial(N.const(7), 0).is_zero()
    pts = PHASE_BOX.sample(50, 2)
    for (f, _), (h, _) in zip(corpus(8, seed=4), corpus(8, seed=5)):
        lhs = alpha_partial(N.mul(f, h), 2)
        rhs = N.add(N.mul(f, alpha_partial(h, 2)), N.mul(h, alpha_partial(f, 2)))
        assert numeric_equal(lhs, rhs, PHASE_BOX, tol=1e-10, points=pts).equal


# numeric_equal, arithmetic ------------------------------------------------------------

def test_numeric_equal_examples():
    e, _ = corpus(1)[0]
    assert numeric_equal(e, e, PHASE_BOX).equal
    s2c2 = parse("sin(q1)^2 + cos(q1)^2", CONFIG)
    assert numeric_equal(s2c2, ONE, DomainBox.uniform(4, 0.1, 3), tol=1e-12).equal
    r = numeric_equal(parse("q1", CONFIG), parse("q1 + 1e-3", CONFIG), DomainBox.uniform(4, 0.1, 3), tol=1e-6)
    assert not r.equal and len(r.worst_point) == 4


def test_alpha_arithmetic():
    assert g(0, 0.5) == 0 and g(1, 0.5) == 1
    assert alpha_add(0, 4.0, 0.5) == pytest.approx(4.0)
    assert alpha_add(2, 3, 1.0) == 5
    # explicit formula at alpha = 1/2: (sqrt 2 + sqrt 3)^2
    assert alpha_add(2, 3, 0.5) == pytest.approx((math.sqrt(2) + math.sqrt(3)) ** 2, rel=1e-14)
    for a, b in ((2.0, 3.0), (-1.5, 0.25), (7.0, -9.0)):
        for al in (0.3, 0.5, 0.7):
            s = alpha_add(a, b, al)
            assert g(s, al) == pytest.approx(g(a, al) + g(b, al), rel=1e-12)
            assert g_inv(g(a, al), al) == pytest.approx(a, rel=1e-14)
            assert g(alpha_sub(a, b, al), al) == pytest.approx(g(a, al) - g(b, al), rel=1e-12)
    assert alpha_mul(2, 3, 0.5) == 6 and alpha_div(3, 2, 0.5) == 1.5
    with pytest.raises(DomainError):
        alpha_div(1, 0, 0.5)
    with pytest.raises(ValueError):
        g(1, 0)


def test_domain_box_sampling_is_interior_and_seeded():
    box = DomainBox(((0.5, 3.0), (2.0, 2.1)))
    pts = box.sample(200, 7)
    assert np.all((pts[:, 0] > 0.5) & (pts[:, 0] < 3) & (pts[:, 1] > 2) & (pts[:, 1] < 2.1))
    assert np.array_equal(pts, box.sample(200, 7))
    with pytest.raises(Exception):
        DomainBox(((1.0, 1.0),))
