import dataclasses
from functools import lru_cache

import numpy as np
import pytest
import sympy as sp

from confgeo.errors import ConfGeoError, MetricError
from confgeo.expr import CONFIG, DomainBox, evaluate_array, numeric_equal, parse
from confgeo.geometry import (
    RICCI_SIGN, calibrate_ricci_sign, christoffel, christoffel_fd, conformance, conformance_summary,
    contracted_bianchi, curvature, flrw, inverse_metric, minkowski, riemann_symmetry_residuals,
    schwarzschild, table_metric,
)
from confgeo.geometry import appendix as appx
from confgeo.geometry.suites import appendix_suite, classical_suite, flatness_suite

q = sp.symbols("q1:5", positive=True)


def sym_metric(name, alpha, M=1, k=0):
    """Line elements written directly in sympy (positive orthant)."""
    a = sp.Rational(alpha).limit_denominator(100)
    w = 2 * (a - 1)
    if name == "schwarzschild":
        f = 1 - 2 * M / q[1]
        return sp.diag(-f * q[0] ** w, q[1] ** w / f, q[1] ** 2 * q[2] ** w,
                       q[1] ** 2 * q[3] ** w * sp.sin(q[2]) ** 2)
    R2 = q[0] ** 4
    return sp.diag(-q[0] ** w, R2 * q[1] ** w / (1 - k * q[1] ** 2), R2 * q[1] ** 2 * q[2] ** w,
                   R2 * q[1] ** 2 * q[3] ** w * sp.sin(q[2]) ** 2)


@lru_cache(maxsize=None)
def sym_curvature(name, alpha, k=0):
    g = sym_metric(name, alpha, k=k)
    gi = g.inv()
    G = [[[sum(gi[m, e] * (sp.diff(g[e, n], q[l]) + sp.diff(g[e, l], q[n]) - sp.diff(g[n, l], q[e]))
               for e in range(4)) / 2 for l in range(4)] for n in range(4)] for m in range(4)]

    def Rup(r, s, m, n):
        return (sp.diff(G[r][n][s], q[m]) - sp.diff(G[r][m][s], q[n])
                + sum(G[r][m][l] * G[l][n][s] - G[r][n][l] * G[l][m][s] for l in range(4)))

    ric = [[sum(Rup(kk, i, kk, j) for kk in range(4)) for j in range(4)] for i in range(4)]
    R1212 = sum(g[0, kk] * Rup(kk, 1, 0, 1) for kk in range(4))
    return g, G, ric, R1212


def _num(expr, pts):
    f = sp.lambdify([q], expr, "numpy")
    return np.array([float(f(p)) for p in pts])


# builtins and inverse -------------------------------------------------------------------

def test_builtin_components():
    box = DomainBox.uniform(4, 0.5, 3)
    assert numeric_equal(minkowski().g(0, 0), parse("-alpha^2*q1^(2*(alpha-1))", CONFIG), box, tol=1e-14).equal
    s = schwarzschild(1.5)
    assert numeric_equal(s.g(1, 1), parse("(1 - 3/q2)^(-1)*q2^(2*(alpha-1))", CONFIG), s.domain, tol=1e-14).equal
    f = flrw(0, "exp(q1/2)")
    assert numeric_equal(f.g(3, 3), parse("exp(q1)*q2^2*abs(q4)^(2*(alpha-1))*sin(q3)^2", CONFIG),
                         f.domain, tol=1e-13).equal
    for spec in (minkowski(), s, f, flrw(1)):
        assert spec.is_diagonal and spec.check(0.7)


def test_builtin_parameter_errors():
    with pytest.raises(MetricError):
        schwarzschild(-1)
    with pytest.raises(MetricError):
        schwarzschild(1, domain=DomainBox(((0.5, 3), (1.5, 6), (0.3, 2.8), (0.5, 3))))
    with pytest.raises(MetricError):
        flrw(1, domain=DomainBox(((0.5, 3), (0.2, 1.5), (0.3, 2.8), (0.5, 3))))
    with pytest.raises(ConfGeoError):
        flrw(0, "q2^2")


@pytest.mark.parametrize("spec", [minkowski(), schwarzschild(1), flrw(1), flrw(-1, "exp(q1/2)")],
                         ids=["minkowski", "schwarzschild", "flrw+1", "flrw-1"])
def test_inverse_metric_against_numeric_inverse(spec):
    pts = spec.domain.sample(50, 0)
    for a in (0.5, 0.7, 1.0):
        G = spec.matrix_at(pts, a)
        Gi = np.moveaxis(evaluate_array(np.array(inverse_metric(spec), dtype=object), pts, a), -1, 0)
        assert np.allclose(Gi, np.linalg.inv(G), rtol=1e-12, atol=1e-14)


def test_minkowski_inverse_display():
    gi = inverse_metric(minkowski())
    assert numeric_equal(gi[0][0], parse("-q1^(2*(1-alpha))/alpha^2", CONFIG), minkowski().domain, tol=1e-14).equal
    pts = minkowski().domain.sample(5, 0)
    assert np.allclose(minkowski().matrix_at(pts, 1.0), np.diag([-1.0, 1, 1, 1]))


# Christoffel ------------------------------------------------------------------------------

def test_christoffel_examples():
    mg = christoffel(minkowski())
    box = minkowski().domain
    for m in range(4):
        assert numeric_equal(mg[m][m][m], parse(f"(alpha - 1)/q{m + 1}", CONFIG), box, tol=1e-13).equal
        for n in range(4):
            for l in range(4):
                if not (m == n == l):
                    assert mg[m][n][l].is_zero()
    s = schwarzschild(1)
    sg = christoffel(s)
    assert numeric_equal(sg[0][0][1], parse("-M/(q2*(2*M - q2))", CONFIG, {"M": 1}), s.domain, tol=1e-13).equal
    assert numeric_equal(sg[3][2][3], parse("cot(q3)", CONFIG), s.domain, tol=1e-13).equal


@pytest.mark.parametrize("spec", [schwarzschild(1), flrw(1), flrw(0, "exp(q1/2)")],
                         ids=["schwarzschild", "flrw+1", "flrw-exp"])
def test_christoffel_finite_differences(spec):
    gam = np.array(christoffel(spec), dtype=object)
    pts = spec.domain.sample(100, 1)
    ours = evaluate_array(gam, pts, 0.7)
    worst = 0.0
    for j, p in enumerate(pts):
        fd = christoffel_fd(spec, p, 0.7)
        worst = max(worst, np.max(np.abs(ours[..., j] - fd) / (1 + np.abs(fd))))
    assert worst < 1e-6


@pytest.mark.parametrize("name", ["schwarzschild", "flrw"])
def test_curvature_against_sympy(name):
    alpha = 0.7
    spec = schwarzschild(1) if name == "schwarzschild" else flrw(1)
    b = curvature(spec)
    g, G, ric, R1212 = sym_curvature(name, alpha, k=1)
    pts = spec.domain.sample(20, 3)
    ours_g = evaluate_array(np.array(b.christoffel, dtype=object), pts, alpha)
    ours_r = evaluate_array(np.array(b.ricci, dtype=object), pts, alpha)
    for m in range(4):
        for n in range(4):
            for l in range(4):
                ref = _num(G[m][n][l], pts)
                assert np.allclose(ours_g[m, n, l], ref, rtol=1e-9, atol=1e-11)
    for i in range(4):
        for j in range(4):
            ref = RICCI_SIGN * _num(ric[i][j], pts)
            assert np.allclose(ours_r[i, j], ref, rtol=1e-8, atol=1e-10)
    ours = evaluate_array(np.array([b.riemann_lowered[0][1][0][1]], dtype=object), pts, alpha)[0]
    assert np.allclose(ours, _num(R1212, pts), rtol=1e-9, atol=1e-11)


def test_r1212_classical_limit():
    s = schwarzschild(1, weighting="conformable")
    b = curvature(s)
    ref = parse("-(1 + alpha)*alpha^2*M*q1^(2*(alpha - 1))/q2^3", CONFIG, {"M": 1})
    assert numeric_equal(b.riemann_lowered[0][1][0][1], ref, s.domain, tol=1e-10, alpha=0.7).equal
    assert numeric_equal(b.riemann_lowered[0][1][0][1], parse("-2/q2^3", CONFIG), s.domain,
                         tol=1e-12, alpha=1.0).equal


@pytest.mark.parametrize("spec", [schwarzschild(1), flrw(1), flrw(0, "exp(q1/2)")],
                         ids=["schwarzschild", "flrw+1", "flrw-exp"])
def test_riemann_symmetries_and_bianchi(spec):
    b = curvature(spec)
    pts = spec.domain.sample(100, 2)
    res = riemann_symmetry_residuals(b, pts, 0.7)
    assert max(res.values()) < 1e-9, res
    div = evaluate_array(np.array(contracted_bianchi(b), dtype=object), spec.domain.sample(20, 4), 0.7)
    assert np.max(np.abs(div)) < 1e-6
    for m in range(4):
        for n in range(4):
            for l in range(4):
                assert b.christoffel[m][n][l] is b.christoffel[m][l][n]


def test_ricci_sign_calibration_matches_convention():
    assert calibrate_ricci_sign() == RICCI_SIGN
    assert curvature(minkowski()).metadata["ricci_sign"] == RICCI_SIGN


# flatness, classical limits, tables ----------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.5, 0.7, 1.0])
def test_flatness(alpha):
    (c,) = flatness_suite(alpha)
    assert c.ok and c.max_residual < 1e-10


def test_classical_limits():
    assert all(c.ok for c in classical_suite())
    # FLRW at alpha = 1: scalar curvature equals the classical value computed by sympy
    spec = flrw(0)
    b = curvature(spec)
    # classical flat FLRW with a = t^2: R = 6 (a''/a + (a'/a)^2) = 36/t^2 for R_ij = R^k_ikj
    pts = spec.domain.sample(50, 0)
    ours = evaluate_array(np.array([b.ricci_scalar], dtype=object), pts, 1.0)[0]
    assert np.allclose(ours, RICCI_SIGN * 36 / pts[:, 0] ** 2, rtol=1e-10)


@pytest.mark.parametrize("name,params", [("schwarzschild", {"M": 1}), ("flrw", {"k": 0}), ("flrw", {"k": 1})])
@pytest.mark.parametrize("alpha", [0.7, 0.5])
def test_appendix_conformance(name, params, alpha):
    res = conformance(table_metric(name, **params), alpha=alpha)
    summary = conformance_summary(res, strict_stale=False)
    assert summary["passed"], summary
    assert not summary["undocumented"] and not summary["failed_repairs"]


def test_appendix_unresolved_entries_are_reported():
    bad = [c for c in appendix_suite(0.7) if not c.ok]
    assert sorted(c.name for c in bad) == ["schwarzschild:ricci[3,3] (M=1) [unresolved]",
                                           "schwarzschild:ricci[4,4] (M=1) [unresolved]"]
    assert all("unresolved" in c.note for c in bad)


def test_tampered_oracle_entry_is_named(monkeypatch):
    entries = appx.load_oracle()
    i = next(j for j, e in enumerate(entries) if e.metric == "flrw" and e.obj == "christoffel"
             and e.key not in appx.load_errata())
    victim = entries[i]
    entries[i] = dataclasses.replace(victim, text=f"1.01*({victim.text})")
    monkeypatch.setattr(appx, "load_oracle", lambda: entries)
    failed = [c for c in appendix_suite(0.7, metrics=(("flrw", {"k": 0}),)) if not c.ok]
    assert [c.name for c in failed] == [victim.label() + " (k=0)"]
