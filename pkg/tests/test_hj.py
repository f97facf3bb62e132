import math

import numpy as np
import pytest
import sympy as sp

from confgeo.errors import ConfGeoError, DomainError
from confgeo.expr import PHASE, evaluate_points, parse
from confgeo.hj import (
    ConstantSet, canonical_constants, flrw_constants, flrw_fields, flrw_temporal_K, hj_suite,
    schwarzschild_constants, schwarzschild_fields, schwarzschild_radial_K,
)
from confgeo.poisson.builtins import flrw_box, schwarzschild_box
from confgeo.poisson.tensors import ScalarField, field_equal

Q = sp.symbols("q1:5", positive=True)
P = sp.symbols("p1:5", positive=True)


def sym_bracket(f, g, a):
    return sum(a ** -2 * P[m] ** (1 - a) * Q[m] ** (1 - a)
               * (sp.diff(f, P[m]) * sp.diff(g, Q[m]) - sp.diff(f, Q[m]) * sp.diff(g, P[m]))
               for m in range(4))


def sym_schwarzschild(a, M=1):
    e = 2 * (1 - a)
    f = 1 - 2 * M / Q[1]
    H = (-Q[0] ** e * P[0] ** 2 / f + f * Q[1] ** e * P[1] ** 2 + Q[2] ** e * P[2] ** 2 / Q[1] ** 2
         + Q[3] ** e * P[3] ** 2 / (Q[1] ** 2 * sp.sin(Q[2]) ** 2)) / 2
    G = Q[3] ** e * P[3] ** 2
    return H, {"E_S": H, "a": P[0] * Q[0] ** (1 - a), "K": Q[2] ** e * P[2] ** 2 + G / sp.sin(Q[2]) ** 2, "G": G}


def sf(text):
    return ScalarField(parse(text, PHASE))


def _lam(e):
    f = sp.lambdify([Q + P], e, "numpy")
    return lambda pts: np.array([float(f(x)) for x in pts])


@pytest.mark.parametrize("alpha", [sp.Rational(1, 2), sp.Rational(7, 10)])
def test_schwarzschild_constants_against_sympy(alpha):
    H, consts = sym_schwarzschild(alpha)
    ours = schwarzschild_fields(1)
    pts = schwarzschild_box(1).sample(20, 0)
    for name, c in consts.items():
        assert np.allclose(evaluate_points(ours[name].expr, pts, float(alpha)), _lam(c)(pts), rtol=1e-12)
        b = _lam(sym_bracket(H, c, alpha))(pts)
        assert np.max(np.abs(b)) < 1e-9


@pytest.mark.parametrize("alpha", [0.5, 0.7, 1.0])
@pytest.mark.parametrize("k", [-1, 0, 1])
@pytest.mark.parametrize("sf", ["q1^2", "exp(q1/2)"])
def test_hj_suite(alpha, k, sf):
    checks = hj_suite(alpha, k=k, scale_factor=sf)
    assert len(checks) == 10
    assert all(c.ok for c in checks), [(c.name, c.max_residual) for c in checks if not c.ok]


def test_alpha_one_collapse():
    s = schwarzschild_fields(1)
    box = schwarzschild_box(1)
    assert field_equal(s["a"], sf("p1"), box=box, alpha=1.0).equal
    assert field_equal(s["G"], sf("p4^2"), box=box, alpha=1.0).equal
    assert field_equal(s["K"], sf("p3^2 + p4^2/sin(q3)^2"), box=box, alpha=1.0).equal
    f = flrw_fields(0, "1")
    ref = parse("(1/2)*(-p1^2 + p2^2 + p3^2/q2^2 + p4^2/(q2^2*sin(q3)^2))", PHASE)
    assert field_equal(f["E_F"], ScalarField(ref), box=flrw_box(0), alpha=1.0).equal
    # K is twice the spatial kinetic part
    kin = parse("p2^2 + p3^2/q2^2 + p4^2/(q2^2*sin(q3)^2)", PHASE)
    assert field_equal(f["K"], ScalarField(kin), box=flrw_box(0), alpha=1.0).equal


def test_two_forms_of_k_agree_identically():
    for a in (0.5, 0.7, 1.0):
        assert field_equal(schwarzschild_fields(2)["K"], schwarzschild_radial_K(2),
                           box=schwarzschild_box(2), alpha=a, tol=1e-9).equal
        assert field_equal(flrw_fields(1, "exp(q1/2)")["K"], flrw_temporal_K(1, "exp(q1/2)"),
                           box=flrw_box(1), alpha=a, tol=1e-10).equal


def test_constant_sets_and_canonical_q():
    x = (1.0, 4.0, 1.2, 1.0, 0.5, 0.3, 0.4, 0.2)
    cs = schwarzschild_constants(x, 0.7)
    Qs = canonical_constants(cs)
    assert Qs.on_chart and Qs.Q[3] == math.sqrt(cs["G"])
    assert Qs.Q[:3] == (cs["E_S"], cs["a"], cs["K"])
    fx = (1.0, 0.5, 1.2, 1.0, 0.5, 0.3, 0.4, 0.2)
    Qf = canonical_constants(flrw_constants(fx, 0.7, k=1))
    assert Qf.on_chart and len(Qf.Q) == 4


def test_canonical_q_edge_cases():
    z = canonical_constants(ConstantSet("schwarzschild", {"E_S": 1.0, "a": 0.5, "K": 2.0, "G": 0.0}))
    assert not z.on_chart and z.Q[3] == 0 and "Q[4]" in z.note
    with pytest.raises(DomainError, match="negative radicand"):
        canonical_constants(ConstantSet("flrw", {"E_F": 1.0, "K": 1.0, "L": -1.0, "G": 1.0}))
    with pytest.raises(ConfGeoError):
        canonical_constants(ConstantSet("kerr", {}))
    with pytest.raises(DomainError):
        schwarzschild_constants((1, 1.5, 1, 1, 1, 1, 1, 1))
    # any state off the singular sets is accepted, negative momenta included
    cs = schwarzschild_constants((1, 10, 1.2, 1, -0.6, 0.3, 0.5, -0.4), 0.7)
    assert cs["G"] > 0
    with pytest.raises(DomainError, match="curvature bound"):
        flrw_constants((1, 1.2, 1, 1, 1, 1, 1, 1), k=1)
