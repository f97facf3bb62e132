"""Master symmetries, bi-Hamiltonian hierarchy and Oevel-type relations.

Everything lives on the canonical (Q, P) chart with H = Q1.  Two reading
choices are built in (see the project notes):

* X_(i,j) and H_(i,j) are pair-indexed: the printed coefficient (1 - alpha i)
  depends on i separately from i + j.
* T_(k+1) = P^{k+1}_{alpha1} o P_alpha^{-1} carries S_{k+1}, which is what the
  composition actually gives; ``recursion_tensor(k, printed=True)`` keeps the
  displayed S_k for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..checks import Check, from_report
from ..errors import ConstraintError
from ..expr import nodes as N
from ..expr.chart import CANONICAL
from ..expr.domain import PHASE_BOX, DomainBox, scaled_residual
from ..expr.evaluate import evaluate_array
from ..poisson.bracket import PoissonStructure, alpha_bivector, alpha_two_form
from ..poisson.calculus import (
    apply_tensor, d, interior_product, lie_bracket, lie_derivative, pair, schouten_bracket,
    tensor_on_bivector, tensor_on_form,
)
from ..poisson.tensors import (
    Bivector, OneForm, ScalarField, TwoForm, VectorField, block_matrix, diagonal_tensor,
    field_equal, identity_tensor,
)
from .operators import canonical_field, nijenhuis_torsion, recursion_from_pair, tensor_power

C = CANONICAL
BOX = PHASE_BOX          # Q in (0.5, 3), P in (0.2, 2)
_A = N.ALPHA_NODE
_Q = [N.coord(m) for m in range(4)]
_P = [N.coord(4 + m) for m in range(4)]


def _c(v):
    return N.const(v)


def _lin(a, b):
    """a + b*alpha as an Expr."""
    return N.add(_c(a), N.mul(_c(b), _A))


def _abs_pow(x, e):
    return N.power(N.abs_(x), e)


# scale factors and index bookkeeping -----------------------------------------------

def S(k: int, t: int = 1):
    """S_{k+t} = (1 - k alpha) / (1 - (k+t) alpha); S with t = 0 is 1."""
    if t == 0:
        return N.ONE
    return N.div(_lin(1, -k), _lin(1, -(k + t)))


def check_constraint(k: int, t: int, alpha: float):
    if t == 0:
        return
    if abs(1.0 - (k + t) * alpha) < 1e-12:
        raise ConstraintError(f"1 - (k+t)*alpha = 0 for k={k}, t={t}, alpha={alpha}")


@dataclass(frozen=True)
class HierarchyIndex:
    """Index (k, l) of the family built from T_(k+1); l is the power of T."""

    k: int
    l: int = 0

    def __post_init__(self):
        if self.k < 0 or self.l < 0:
            raise ConstraintError("hierarchy indices must be non-negative")

    def validate(self, alpha: float):
        """1 - (k+1) alpha != 0, and S_{k+1} != 0 so that P^{k+1} is nondegenerate."""
        check_constraint(self.k, 1, alpha)
        if abs(1.0 - self.k * alpha) < 1e-12:
            raise ConstraintError(f"S_(k+1) = 0 for k={self.k}, alpha={alpha}: "
                                  "P^(k+1) vanishes and has no inverse form")
        return self


# basic objects -------------------------------------------------------------------

def hamiltonian():
    return ScalarField(_Q[0], C)


def omega_alpha() -> TwoForm:
    return alpha_two_form(C)


def bivector_alpha() -> Bivector:
    return alpha_bivector(C)


def structure_alpha() -> PoissonStructure:
    return PoissonStructure(bivector_alpha(), "P_alpha")


def x_alpha() -> VectorField:
    return canonical_field(C)


def master_integral(j: int) -> ScalarField:
    """H~_j = -sum alpha |Q|^{alpha(1-j)-1} Q |P|^{alpha-1} P."""
    terms = []
    for m in range(4):
        terms.append(N.prod_exprs([_A, _abs_pow(_Q[m], _lin(-1, 1 - j)), _Q[m],
                                   _abs_pow(_P[m], N.sub(_A, N.ONE)), _P[m]]))
    return ScalarField(N.neg(N.sum_exprs(terms)), C)


def master_symmetry(j: int) -> VectorField:
    """Z_j = {H~_j, .}_alpha."""
    return structure_alpha().hamiltonian_vector_field(master_integral(j))


def master_symmetry_display(j: int) -> VectorField:
    """sum |Q|^{-alpha j} ((1-j) P d/dP - Q d/dQ)."""
    comps = [N.ZERO] * 8
    for m in range(4):
        w = _abs_pow(_Q[m], N.mul(_c(-j), _A))
        comps[m] = N.neg(N.mul(w, _Q[m]))
        comps[4 + m] = N.prod_exprs([_c(1 - j), w, _P[m]])
    return VectorField(comps, C)


def pair_hamiltonian(i: int, j: int = 0) -> ScalarField:
    """H_(i,j) = (1 - alpha i) Q1^{1 - alpha(i+j)}."""
    return ScalarField(N.mul(_lin(1, -i), N.power(_Q[0], _lin(1, -(i + j)))), C)


def pair_field(i: int, j: int = 0) -> VectorField:
    """X_(i,j) = -alpha^-2 (1 - alpha i)(1 - (i+j)alpha) |Q1|^{1-alpha(i+j+1)} |P1|^{1-alpha} d/dP1."""
    comps = [N.ZERO] * 8
    comps[4] = N.neg(N.prod_exprs([N.power(_A, _c(-2)), _lin(1, -i), _lin(1, -(i + j)),
                                   _abs_pow(_Q[0], _lin(1, -(i + j + 1))),
                                   _abs_pow(_P[0], _lin(1, -1))]))
    return VectorField(comps, C)


def hamiltonian_field(n: int) -> VectorField:
    """X_(0,n) = {Q1^{1 - alpha n}, .}_alpha."""
    return structure_alpha().hamiltonian_vector_field(pair_hamiltonian(0, n))


def second_bivector(k: int = 0) -> Bivector:
    """P^{k+1}_{alpha1} = S_{k+1} sum alpha^-2 Q |P|^{1-alpha} d/dP ^ d/dQ."""
    s = S(k)
    return block_matrix([N.prod_exprs([s, N.power(_A, _c(-2)), _Q[m], _abs_pow(_P[m], _lin(1, -1))])
                         for m in range(4)], Bivector, C)


def second_form(k: int = 0) -> TwoForm:
    """omega^{k+1}_{alpha1} = sum alpha^2 S^{-1} Q^{-1} |P|^{alpha-1} dP ^ dQ."""
    s = S(k)
    return block_matrix([N.prod_exprs([N.power(_A, N.TWO), N.div(N.ONE, s), N.power(_Q[m], _c(-1)),
                                       _abs_pow(_P[m], N.sub(_A, N.ONE))])
                         for m in range(4)], TwoForm, C)


def recursion_tensor(k: int = 0, printed: bool = False):
    """T_(k+1) = S_{k+1} |Q|^{alpha-1} Q (...); ``printed`` uses S_k as displayed."""
    s = (S(k - 1) if k > 0 else N.ONE) if printed else S(k)
    entries = [N.prod_exprs([s, _abs_pow(_Q[m], N.sub(_A, N.ONE)), _Q[m]]) for m in range(4)]
    return diagonal_tensor(entries + entries, C)


def recursion_from_hierarchy_pair(k: int = 0):
    return recursion_from_pair(second_bivector(k), omega_alpha())


def conformal_symmetry() -> VectorField:
    """Z_0 = sum (P d/dP - Q d/dQ)."""
    return master_symmetry_display(0)


def generalized_structure(k: int, t: int) -> PoissonStructure:
    """{f,g}^{k+t}_t with weight alpha^-2 S_{k+t} |Q|^{1+alpha(t-1)} |P|^{1-alpha}."""
    s = S(k, t)
    w = [N.prod_exprs([N.power(_A, _c(-2)), s, _abs_pow(_Q[m], _lin(1, t - 1)),
                       _abs_pow(_P[m], _lin(1, -1))]) for m in range(4)]
    return PoissonStructure.from_weights(w, C, f"P^{k + t}_{t}")


# families indexed by (k, l) --------------------------------------------------------

def _Sl(k, l):
    return N.power(S(k), _c(l))


def family_x(k, l):
    """X^{k+1}_l = -alpha^-2 S^l Q1^{1+alpha(l-1)} |P1|^{1-alpha} d/dP1."""
    comps = [N.ZERO] * 8
    comps[4] = N.neg(N.prod_exprs([N.power(_A, _c(-2)), _Sl(k, l), N.power(_Q[0], _lin(1, l - 1)),
                                   _abs_pow(_P[0], _lin(1, -1))]))
    return VectorField(comps, C)


def family_z(k, l):
    comps = [N.ZERO] * 8
    for m in range(4):
        w = N.prod_exprs([_Sl(k, l), _abs_pow(_Q[m], N.mul(_c(l), N.sub(_A, N.ONE))),
                          N.power(_Q[m], _c(l))])
        comps[m] = N.neg(N.mul(w, _Q[m]))
        comps[4 + m] = N.mul(w, _P[m])
    return VectorField(comps, C)


def family_p(k, l):
    return block_matrix([N.prod_exprs([N.power(_A, _c(-2)), _Sl(k, l), N.power(_Q[m], _c(l)),
                                       _abs_pow(_P[m], _lin(1, -1)),
                                       _abs_pow(_Q[m], N.mul(_lin(1, -1), _c(1 - l)))])
                         for m in range(4)], Bivector, C)


def family_omega(k, l):
    return block_matrix([N.prod_exprs([N.power(_A, N.TWO), _Sl(k, l), N.power(_Q[m], _c(l)),
                                       _abs_pow(_P[m], N.sub(_A, N.ONE)),
                                       _abs_pow(_Q[m], N.mul(N.sub(_A, N.ONE), _c(l + 1)))])
                         for m in range(4)], TwoForm, C)


def family_h(k, l):
    """H^{k+1}_l = S^l Q1^{alpha l + 1} / (alpha l + 1)."""
    return ScalarField(N.div(N.mul(_Sl(k, l), N.power(_Q[0], _lin(1, l))), _lin(1, l)), C)


def family_dh(k, l):
    comps = [N.ZERO] * 8
    comps[0] = N.mul(_Sl(k, l), N.power(_Q[0], N.mul(_A, _c(l))))
    return OneForm(comps, C)


# the same families obtained by applying powers of T_(k+1)

def derived_x(k, l):
    return apply_tensor(tensor_power(recursion_tensor(k), l), x_alpha())


def derived_z(k, l):
    return apply_tensor(tensor_power(recursion_tensor(k), l), conformal_symmetry())


def derived_p(k, l):
    return tensor_on_bivector(tensor_power(recursion_tensor(k), l), bivector_alpha())


def derived_omega(k, l):
    return tensor_on_form(omega_alpha(), tensor_power(recursion_tensor(k), l))


def derived_dh(k, l):
    T = tensor_power(recursion_tensor(k), l)
    dH = d(hamiltonian())
    # (T^*)^l dH: (T^* t)_j = t_i T^i_j
    return OneForm([N.sum_exprs(N.mul(dH[i], T[i, j]) for i in range(8) if not dH[i].is_zero())
                    for j in range(8)], C)


# suites ------------------------------------------------------------------------------

def _field_check(name, a, b, box, n, seed, alpha, tol):
    return from_report(name, field_equal(a, b, box=box, n=n, tol=tol, seed=seed, alpha=alpha), tol)


def _coefficient(name, lhs, ref, target, box, n, seed, alpha, tol):
    """Recover c from lhs = c * ref and report |c - target| together with the fit residual."""
    pts = box.sample(n, seed)
    a = lhs.evaluate(pts, alpha).reshape(n, -1)
    b = ref.evaluate(pts, alpha).reshape(n, -1)
    denom = float(np.sum(b * b))
    c = float(np.sum(a * b) / denom) if denom > 0 else 0.0
    res = scaled_residual(a, c * b).max(axis=1)
    j = int(np.argmax(res))
    worst = max(float(res[j]), abs(c - target))
    chk = Check(name, worst, tuple(float(x) for x in pts[j]), tol)
    chk.extra["coefficient"] = c
    chk.extra["target"] = target
    return chk


def torsion_check(name, T, box, n, seed, alpha, tol):
    """max |N_T| over sampled points, scaled by 1 + max |T|."""
    pts = box.sample(n, seed)
    NT = evaluate_array(nijenhuis_torsion(T), pts, alpha)
    scale = 1.0 + np.abs(T.evaluate(pts, alpha)).reshape(n, -1).max(axis=1)
    res = np.abs(NT).reshape(-1, n).max(axis=0) / scale
    j = int(np.argmax(res))
    return Check(name, float(res[j]), tuple(float(x) for x in pts[j]), tol)


def conformal_coefficients(alpha=0.7, k=0, n=100, seed=0, box: DomainBox = BOX, tol=1e-9):
    """(alpha~, beta~, gamma~) recovered from L_{Z_0} on P_alpha, P^{k+1}_{alpha1}, H."""
    HierarchyIndex(k).validate(alpha)
    Z0 = conformal_symmetry()
    P1 = second_bivector(k)
    H = hamiltonian()
    return [
        _coefficient("conformal alpha~ (L_Z0 P_alpha)", lie_derivative(Z0, bivector_alpha()),
                     bivector_alpha(), 0.0, box, n, seed, alpha, tol),
        _coefficient(f"conformal beta~ (L_Z0 P^{k + 1}_alpha1)", lie_derivative(Z0, P1), P1,
                     -alpha, box, n, seed, alpha, tol),
        _coefficient("conformal gamma~ (L_Z0 H)", lie_derivative(Z0, H), H, -1.0,
                     box, n, seed, alpha, tol),
    ]


def hierarchy_suite(alpha=0.7, n=100, seed=0, box: DomainBox = BOX, tol=1e-9, max_index=2):
    """Master symmetries, pair-indexed brackets, bi-Hamiltonian and compatibility checks."""
    out = []
    P = structure_alpha()
    w = omega_alpha()
    R = range(max_index + 1)
    for j in R:
        Z = master_symmetry(j)
        out.append(_field_check(f"Z_{j} = {{H~_{j},.}} display", Z, master_symmetry_display(j),
                                box, n, seed, alpha, tol))
        out.append(_field_check(f"iota_Z{j} omega = -dH~_{j}", interior_product(Z, w),
                                -d(master_integral(j)), box, n, seed, alpha, tol))
    for i in R:
        Xi = hamiltonian_field(i)
        out.append(_field_check(f"X_(0,{i}) display", Xi, pair_field(0, i), box, n, seed, alpha, tol))
        for j in R:
            out.append(_field_check(f"[X_{i}, Z_{j}] = X_({i},{j})",
                                    lie_bracket(Xi, master_symmetry(j)), pair_field(i, j),
                                    box, n, seed, alpha, tol))
            out.append(_field_check(f"[X_{i}, X_{i + j}] = 0", lie_bracket(Xi, hamiltonian_field(i + j)),
                                    0, box, n, seed, alpha, tol))
            out.append(_field_check(f"H_({i},{j}) = {{H_{i}, H~_{j}}}",
                                    P.bracket(pair_hamiltonian(0, i), master_integral(j)),
                                    pair_hamiltonian(i, j), box, n, seed, alpha, tol))
    for k in R:
        try:
            HierarchyIndex(k).validate(alpha)
        except ConstraintError as exc:
            out.append(Check(f"k={k} constraint", float("inf"), (), tol, note=str(exc)))
            continue
        P1 = second_bivector(k)
        out.append(_field_check(f"[P_alpha, P^{k + 1}_alpha1] = 0",
                                schouten_bracket(bivector_alpha(), P1), 0, box, n, seed, alpha, tol))
        out.append(_field_check(f"X_{k} = {{H_{k + 1},.}}^{k + 1}_alpha1",
                                PoissonStructure(P1).hamiltonian_vector_field(pair_hamiltonian(0, k + 1)),
                                hamiltonian_field(k), box, n, seed, alpha, tol))
        T = recursion_from_hierarchy_pair(k)
        out.append(_field_check(f"T_({k + 1}) = P^{k + 1}_alpha1 o P_alpha^-1", T, recursion_tensor(k),
                                box, n, seed, alpha, tol))
        out.append(torsion_check(f"N_T({k + 1}) = 0", T, box, n, seed, alpha, tol))
        out.append(_field_check(f"omega^{k + 1}_alpha1 inverse to P^{k + 1}_alpha1",
                                recursion_from_pair(P1, second_form(k)),
                                identity_tensor(C), box, n, seed, alpha, tol))
        out.extend(conformal_coefficients(alpha, k, n, seed, box, tol))
    return out


def oevel_suite(alpha=0.7, ks=(0, 1, 2), lhs=(0, 1, 2), n=100, seed=0, box: DomainBox = BOX, tol=1e-9):
    """The six Oevel-type relations for every k in ks and l, h in lhs."""
    out = []
    a = alpha
    for k in ks:
        try:
            HierarchyIndex(k).validate(alpha)
        except ConstraintError as exc:
            out.append(Check(f"k={k} constraint", float("inf"), (), tol, note=str(exc)))
            continue
        T = recursion_tensor(k)
        for l in lhs:
            out.append(_field_check(f"k={k} X_{l} = T^{l} X_alpha", derived_x(k, l), family_x(k, l),
                                    box, n, seed, alpha, tol))
            out.append(_field_check(f"k={k} Z_{l} = T^{l} Z_0", derived_z(k, l), family_z(k, l),
                                    box, n, seed, alpha, tol))
            out.append(_field_check(f"k={k} P_{l} = T^{l} P_alpha", derived_p(k, l), family_p(k, l),
                                    box, n, seed, alpha, tol))
            out.append(_field_check(f"k={k} omega_{l} = omega T^{l}", derived_omega(k, l),
                                    family_omega(k, l), box, n, seed, alpha, tol))
            out.append(_field_check(f"k={k} dH_{l} = (T^*)^{l} dH", derived_dh(k, l), family_dh(k, l),
                                    box, n, seed, alpha, tol))
            out.append(_field_check(f"k={k} dH_{l} = d H_{l}", d(family_h(k, l)), family_dh(k, l),
                                    box, n, seed, alpha, tol))
            Zl = family_z(k, l)
            out.append(_field_check(f"k={k} L_Z{l} T = -alpha T^{l + 1}", lie_derivative(Zl, T),
                                    tensor_power(T, l + 1).scale(-a), box, n, seed, alpha, tol))
            for h in lhs:
                s = l + h
                out.append(_field_check(f"k={k} L_Z{l} Z_{h}", lie_derivative(Zl, family_z(k, h)),
                                        family_z(k, s).scale(a * (l - h)), box, n, seed, alpha, tol))
                out.append(_field_check(f"k={k} L_Z{l} X_{h}", lie_derivative(Zl, family_x(k, h)),
                                        family_x(k, s).scale(-(h * a + 1)), box, n, seed, alpha, tol))
                out.append(_field_check(f"k={k} L_Z{l} P_{h}", lie_derivative(Zl, family_p(k, h)),
                                        family_p(k, s).scale(a * (l - h)), box, n, seed, alpha, tol))
                out.append(_field_check(f"k={k} L_Z{l} omega_{h}", lie_derivative(Zl, family_omega(k, h)),
                                        family_omega(k, s).scale(-a * s), box, n, seed, alpha, tol))
                out.append(_field_check(f"k={k} <dH_{l}, Z_{h}>", pair(family_dh(k, l), family_z(k, h)),
                                        family_h(k, s).scale(-(a * s + 1)), box, n, seed, alpha, tol))
    return out


def generalized_suite(alpha=0.7, pairs=None, n=100, seed=0, box: DomainBox = BOX, tol=1e-9):
    """X_k = {H_{k+t}, .}^{k+t}_t for (k, t) in pairs; t = 0 is the alpha-bracket itself."""
    pairs = pairs if pairs is not None else [(k, t) for k in range(3) for t in range(3)]
    out = []
    for k, t in pairs:
        try:
            check_constraint(k, t, alpha)
        except ConstraintError as exc:
            out.append(Check(f"(k,t)=({k},{t}) constraint", float("inf"), (), tol, note=str(exc)))
            continue
        G = generalized_structure(k, t)
        out.append(_field_check(f"X_{k} = {{H_{k + t},.}}^{k + t}_{t}",
                                G.hamiltonian_vector_field(pair_hamiltonian(0, k + t)),
                                hamiltonian_field(k), box, n, seed, alpha, tol))
    return out
