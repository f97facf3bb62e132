"""Transcribed Hamiltonians, symmetry fields, forms and bivectors.

Minkowski objects carry the metric signs (-, +, +, +): index 0 gets the sign
of the mu = 1 term, indices 1..3 the sign of the k = 2..4 sum.  Every object is
typed exactly as displayed; whether the displays satisfy the stated
identities is a question for the verification suites, not for this module.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ConfGeoError
from ..expr import nodes as N
from ..expr.calculus import diff
from ..expr.domain import DomainBox, MOMENTUM_BOX, PHASE_BOX
from ..expr.parser import parse
from .tensors import Bivector, ScalarField, TwoForm, VectorField, block_matrix

_A = N.ALPHA_NODE
q = tuple(N.coord(i) for i in range(4))
p = tuple(N.coord(4 + i) for i in range(4))
SIGNS = (-1, 1, 1, 1)

_EXP = N.div(N.sub(N.ONE, _A), N.add(N.ONE, _A))            # (1-a)/(1+a)
_HALF_INV_A2 = N.div(N.HALF, N.power(_A, N.TWO))             # 1/(2 a^2)


def _signed(s, e):
    return e if s > 0 else N.neg(e)


def _ab(x):
    return N.abs_(x)


def _pw(x, e):
    return N.power(x, N.as_expr(e))


def _frac(n, m=1):
    return N.const(Fraction(n, m))


# alpha-Minkowski ------------------------------------------------------------------

def minkowski_hamiltonian() -> ScalarField:
    """H_alpha = sum_mu s_mu a^2/(a+1) |q|^{a-1} |p|^{a+1}."""
    c = N.div(N.power(_A, N.TWO), N.add(_A, N.ONE))
    terms = [_signed(SIGNS[m], N.mul(c, N.mul(_pw(_ab(q[m]), N.sub(_A, N.ONE)),
                                             _pw(_ab(p[m]), N.add(_A, N.ONE)))))
             for m in range(4)]
    return ScalarField(N.sum_exprs(terms))


def minkowski_field_display() -> VectorField:
    """The cotangent form of the geodesic spray: -p1 dq1 + ... as displayed."""
    r = N.div(N.sub(_A, N.ONE), N.add(_A, N.ONE))
    comps = [N.ZERO] * 8
    for m in range(4):
        s = SIGNS[m]
        comps[m] = _signed(s, p[m])
        comps[4 + m] = _signed(-s, N.mul(r, N.div(N.power(p[m], N.TWO), q[m])))
    return VectorField(comps)


def master_symmetry() -> VectorField:
    """Y_alpha: only d/dp components."""
    comps = [N.ZERO] * 8
    for m in range(4):
        e = N.mul(_HALF_INV_A2, N.prod_exprs([
            _pw(_ab(p[m]), N.sub(N.ONE, _A)), _pw(p[m], -2),
            _pw(_ab(q[m]), N.sub(N.ONE, _A)), _pw(_ab(q[m]), _EXP)]))
        comps[4 + m] = _signed(SIGNS[m], e)
    return VectorField(comps)


def master_first_integral() -> ScalarField:
    """L_alpha = 1/2 sum p^{-1} q^{(1-a)/(1+a)} (all plus signs, as displayed)."""
    return ScalarField(N.mul(N.HALF, N.sum_exprs(
        N.mul(_pw(p[m], -1), _pw(q[m], _EXP)) for m in range(4))))


def alpha_symplectic_form():
    from .bracket import alpha_two_form
    return alpha_two_form()


def alpha_poisson_bivector():
    from .bracket import alpha_bivector
    return alpha_bivector()


def second_symplectic_form():
    """omega_{alpha1} = sum -s_mu p^{-3} |q|^{(1-a)/(1+a)} dp ^ dq  (block 1 positive)."""
    return block_matrix([_signed(-SIGNS[m], N.mul(_pw(p[m], -3), _pw(_ab(q[m]), _EXP)))
                           for m in range(4)], TwoForm)


def second_poisson_bivector():
    """P_{alpha1} = sum -s_mu p^3 |q|^{(a-1)/(1+a)} d/dp ^ d/dq  (block 1 positive)."""
    e = N.div(N.sub(_A, N.ONE), N.add(N.ONE, _A))
    return block_matrix([_signed(-SIGNS[m], N.mul(_pw(p[m], 3), _pw(_ab(q[m]), e)))
                           for m in range(4)], Bivector)


def noether_field_display() -> VectorField:
    """X_{alpha1} as displayed, with G_i = sgn(p_i) sgn(q^i).

    Every block carries the overall factor -1/(2 a^2); the mu = 1 block uses
    |p_1|^{-a}, the k-blocks p_k^{-a}, exactly as printed.
    """
    e_p = N.div(N.sub(N.sub(N.ONE, N.mul(N.TWO, _A)), N.power(_A, N.TWO)), N.add(N.ONE, _A))
    e_q = N.div(N.sub(N.sub(N.TWO, _A), N.power(_A, N.TWO)), N.add(N.ONE, _A))
    ratio = N.div(N.sub(N.ONE, _A), N.add(N.ONE, _A))
    comps = [N.ZERO] * 8
    for m in range(4):
        G = N.mul(N.sign(p[m]), N.sign(q[m]))
        pm = _pw(_ab(p[m]), N.neg(_A)) if m == 0 else _pw(p[m], N.neg(_A))
        dp = N.prod_exprs([ratio, G, pm, _pw(_ab(q[m]), e_p)])
        dq = N.prod_exprs([_pw(_ab(p[m]), N.sub(N.ONE, _A)), _pw(p[m], -2), _pw(_ab(q[m]), e_q)])
        comps[4 + m] = N.neg(N.mul(_HALF_INV_A2, dp))
        comps[m] = N.neg(N.mul(_HALF_INV_A2, dq))
    return VectorField(comps)


def second_hamiltonian() -> ScalarField:
    """L~_alpha = sum |q|^{(1-a)/(1+a)} p^{-1}."""
    return ScalarField(N.sum_exprs(N.mul(_pw(_ab(q[m]), _EXP), _pw(p[m], -1)) for m in range(4)))


# Schwarzschild and FLRW -------------------------------------------------------

def _param(v):
    v = float(v)
    return N.const(Fraction(int(v))) if v.is_integer() else N.const(v)


_W = N.mul(N.TWO, N.sub(N.ONE, _A))                          # 2(1-a)


def schwarzschild_hamiltonian(M=1) -> ScalarField:
    Mx = _param(M)
    f = N.sub(N.ONE, N.div(N.mul(N.TWO, Mx), q[1]))
    e = _W
    r2 = N.power(q[1], N.TWO)
    s2 = N.power(N.sin(q[2]), N.TWO)
    terms = [
        N.neg(N.mul(N.HALF, N.prod_exprs([N.power(f, N.MINUS_ONE), _pw(q[0], e), _pw(p[0], 2)]))),
        N.mul(N.HALF, N.prod_exprs([f, _pw(q[1], e), _pw(p[1], 2)])),
        N.div(N.mul(_pw(q[2], e), _pw(p[2], 2)), N.mul(N.TWO, r2)),
        N.div(N.mul(_pw(q[3], e), _pw(p[3], 2)), N.mul(N.TWO, N.mul(r2, s2))),
    ]
    return ScalarField(N.sum_exprs(terms))


def _scale(scale_factor):
    a = parse(scale_factor, ["q1"]) if isinstance(scale_factor, str) else N.as_expr(scale_factor)
    if a.coords - {0}:
        raise ConfGeoError("scale factor may depend on q1 only")
    return a


def flrw_hamiltonian(k=0, scale_factor="q1^2") -> ScalarField:
    R = _scale(scale_factor)
    R2 = N.power(R, N.TWO)
    kx = _param(k)
    e = _W
    r2 = N.power(q[1], N.TWO)
    s2 = N.power(N.sin(q[2]), N.TWO)
    terms = [
        N.neg(N.mul(N.HALF, N.mul(_pw(q[0], e), _pw(p[0], 2)))),
        N.div(N.prod_exprs([N.sub(N.ONE, N.mul(kx, r2)), _pw(q[1], e), _pw(p[1], 2)]),
              N.mul(N.TWO, R2)),
        N.div(N.mul(_pw(q[2], e), _pw(p[2], 2)), N.mul(N.TWO, N.mul(r2, R2))),
        N.div(N.mul(_pw(q[3], e), _pw(p[3], 2)), N.prod_exprs([N.TWO, r2, R2, s2])),
    ]
    return ScalarField(N.sum_exprs(terms))


def _eta(nu):
    return N.mul(_pw(q[nu], N.mul(N.TWO, N.sub(N.ONE, _A))), p[nu])


def _zeta(nu):
    return N.mul(_pw(q[nu], N.sub(N.ONE, N.mul(N.TWO, _A))), _pw(p[nu], 2))


def _display_field(V, U):
    from .bracket import alpha_weight
    comps = [N.ZERO] * 8
    for m in range(4):
        w = alpha_weight(m)
        comps[m] = N.mul(w, V[m])
        comps[4 + m] = N.mul(w, U[m])
    return VectorField(comps)


def schwarzschild_field_display(M=1) -> VectorField:
    """X_{S alpha} = sum w_mu (V_mu d/dq + U_mu d/dp) with the displayed V, U."""
    Mx = _param(M)
    f = N.sub(N.ONE, N.div(N.mul(N.TWO, Mx), q[1]))
    fi = N.power(f, N.MINUS_ONE)
    r2, r3 = N.power(q[1], N.TWO), N.power(q[1], _frac(3))
    s2, s3 = N.power(N.sin(q[2]), N.TWO), N.power(N.sin(q[2]), _frac(3))
    oma = N.sub(N.ONE, _A)
    eta, zeta = [_eta(i) for i in range(4)], [_zeta(i) for i in range(4)]
    V = [N.neg(N.mul(fi, eta[0])), N.mul(f, eta[1]), N.div(eta[2], r2), N.div(eta[3], N.mul(r2, s2))]
    MoR2 = N.div(Mx, r2)
    U = [
        N.prod_exprs([oma, fi, zeta[0]]),
        N.neg(N.sum_exprs([
            N.prod_exprs([MoR2, N.power(f, N.const(-2)), eta[0], p[0]]),
            N.prod_exprs([oma, f, zeta[1]]),
            N.prod_exprs([MoR2, eta[1], p[1]]),
            N.neg(N.div(N.mul(eta[2], p[2]), r3)),
            N.neg(N.div(N.mul(eta[3], p[3]), N.mul(r3, s2))),
        ])),
        N.neg(N.sub(N.div(N.mul(oma, zeta[2]), r2),
                    N.div(N.mul(N.cos(q[2]), N.mul(eta[3], p[3])), N.mul(r2, s3)))),
        N.neg(N.div(N.mul(oma, zeta[3]), N.mul(r2, s2))),
    ]
    return _display_field(V, U)


def flrw_field_display(k=0, scale_factor="q1^2", corrected=False) -> VectorField:
    """X_{F alpha} with the displayed V~, U~.

    The display disagrees with {H_F, .} in four places (see FLRW_DISPLAY_ERRATA);
    ``corrected=True`` applies the four local repairs.
    """
    R = _scale(scale_factor)
    dR = diff(R, 0)
    R2, R3 = N.power(R, N.TWO), N.power(R, _frac(3))
    kx = _param(k)
    r2, r3 = N.power(q[1], N.TWO), N.power(q[1], _frac(3))
    s2, s3 = N.power(N.sin(q[2]), N.TWO), N.power(N.sin(q[2]), _frac(3))
    oma = N.sub(N.ONE, _A)
    one_k = N.sub(N.ONE, N.mul(kx, r2))
    eta, zeta = [_eta(i) for i in range(4)], [_zeta(i) for i in range(4)]
    v1 = N.neg(eta[0]) if corrected else eta[0]
    v2_den = R2 if corrected else N.mul(N.TWO, R2)
    u1_den4 = N.mul(r2, s2) if corrected else s2
    u2_pre = N.div(N.ONE, R2) if corrected else N.div(_pw(p[1], 2), R2)
    V = [
        v1,
        N.mul(N.div(one_k, v2_den), eta[1]),
        N.div(eta[2], N.mul(r2, R2)),
        N.div(eta[3], N.prod_exprs([r2, R2, s2])),
    ]
    U = [
        N.add(N.mul(oma, zeta[0]), N.mul(N.div(N.sum_exprs([
            N.prod_exprs([one_k, eta[1], p[1]]),
            N.div(N.mul(eta[2], p[2]), r2),
            N.div(N.mul(eta[3], p[3]), u1_den4)]), R3), dR)),
        N.sum_exprs([
            N.neg(N.mul(u2_pre,
                        N.add(N.neg(N.prod_exprs([kx, q[1], eta[1], p[1]])),
                              N.prod_exprs([oma, one_k, zeta[1]])))),
            N.div(N.mul(eta[2], p[2]), N.mul(r3, R2)),
            N.div(N.mul(eta[3], p[3]), N.prod_exprs([r3, R2, s2])),
        ]),
        N.add(N.neg(N.div(N.mul(oma, zeta[2]), N.mul(r2, R2))),
              N.div(N.mul(N.cos(q[2]), N.mul(eta[3], p[3])), N.prod_exprs([r2, R2, s3]))),
        N.neg(N.div(N.mul(oma, zeta[3]), N.prod_exprs([r2, R2, s2]))),
    ]
    return _display_field(V, U)


# Components of the X_F display that disagree with {H_F, .}; index into the
# 8-vector (q1..q4, p1..p4) with the reason.
FLRW_DISPLAY_ERRATA = {
    0: "V~1 has the wrong sign (H_F carries -1/2 on the p1 term)",
    1: "V~2 carries a spurious factor 1/2",
    4: "U~1: the eta4 p4 term lacks the factor 1/(q2)^2",
    5: "U~2: spurious leading factor p2^2",
}
SCHWARZSCHILD_DISPLAY_ERRATA = {}


# boxes ----------------------------------------------------------------------------

def minkowski_box():
    return PHASE_BOX


def schwarzschild_box(M=1):
    return DomainBox(((0.5, 3.0), (2.5 * M, 6.0 * M), (0.3, 2.8), (0.5, 3.0))).extended(MOMENTUM_BOX)


def flrw_box(k=0):
    hi = 0.9 / k ** 0.5 if k > 0 else 3.0
    return DomainBox(((0.5, 3.0), (0.2, hi), (0.3, 2.8), (0.5, 3.0))).extended(MOMENTUM_BOX)


_REGISTRY = {
    "H_alpha": minkowski_hamiltonian,
    "X_alpha_display": minkowski_field_display,
    "Y_alpha": master_symmetry,
    "L_alpha": master_first_integral,
    "omega_alpha": alpha_symplectic_form,
    "P_alpha": alpha_poisson_bivector,
    "omega_alpha1": second_symplectic_form,
    "X_alpha1_display": noether_field_display,
    "P_alpha1": second_poisson_bivector,
    "L_tilde": second_hamiltonian,
    "H_S": schwarzschild_hamiltonian,
    "X_S_display": schwarzschild_field_display,
    "H_F": flrw_hamiltonian,
    "X_F_display": flrw_field_display,
}


def builtin(name, **params):
    """Look up a transcribed object by name; metric parameters as keywords."""
    try:
        fn = _REGISTRY[name]
    except KeyError:
        raise ConfGeoError(f"unknown builtin {name!r}; known: {', '.join(sorted(_REGISTRY))}") from None
    return fn(**params)


def builtin_names():
    return sorted(_REGISTRY)
