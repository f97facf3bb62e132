"""Poisson structures given by a bivector, and the alpha-deformed bracket.

With P the bivector, {f, g} = P^{ij} d_i f d_j g and the Hamiltonian field of
H is X_H^j = P^{ij} d_i H, so that X_H(g) = {H, g}.  On the (p_m, q_m) block
P^{p q} = w_m gives {f, g} = sum_m w_m (f_p g_q - f_q g_p).
"""

from __future__ import annotations

from ..expr import nodes as N
from ..expr.calculus import diff
from ..expr.chart import PHASE
from .calculus import schouten_bracket, sharp, d
from .tensors import DIM, Bivector, ScalarField, TwoForm, VectorField, as_scalar, block_matrix

_A = N.ALPHA_NODE
_ONE_MINUS_A = N.sub(N.ONE, _A)


def alpha_weight(m, chart=PHASE):
    """alpha^{-2} |p_m|^{1-alpha} |q^m|^{1-alpha}."""
    q, p = N.coord(m), N.coord(4 + m)
    return N.mul(N.power(_A, N.const(-2)),
                 N.mul(N.power(N.abs_(p), _ONE_MINUS_A), N.power(N.abs_(q), _ONE_MINUS_A)))


def alpha_symplectic_weight(m, chart=PHASE):
    """alpha^2 |p_m|^{alpha-1} |q^m|^{alpha-1}."""
    q, p = N.coord(m), N.coord(4 + m)
    e = N.sub(_A, N.ONE)
    return N.mul(N.power(_A, N.TWO),
                 N.mul(N.power(N.abs_(p), e), N.power(N.abs_(q), e)))


def alpha_bivector(chart=PHASE) -> Bivector:
    return block_matrix([alpha_weight(m, chart) for m in range(4)], Bivector, chart)


def alpha_two_form(chart=PHASE) -> TwoForm:
    return block_matrix([alpha_symplectic_weight(m, chart) for m in range(4)], TwoForm, chart)


class PoissonStructure:
    """A bracket defined by a bivector."""

    def __init__(self, bivector: Bivector, name="P"):
        self.bivector = bivector
        self.name = name
        self.chart = bivector.chart

    @classmethod
    def from_weights(cls, weights, chart=PHASE, name="P"):
        """Block-diagonal structure with P^{p_m q_m} = weights[m]."""
        return cls(block_matrix(weights, Bivector, chart), name)

    def bracket(self, f, g) -> ScalarField:
        f, g = as_scalar(f, self.chart).expr, as_scalar(g, self.chart).expr
        P = self.bivector
        terms = []
        df = [diff(f, i) for i in range(DIM)]
        dg = [diff(g, j) for j in range(DIM)]
        # paired over i < j so that {g, f} is the exact float negation of {f, g}
        for (i, j), w in P.nonzero():
            if i > j:
                continue
            a = N.ZERO if df[i].is_zero() or dg[j].is_zero() else N.mul(df[i], dg[j])
            b = N.ZERO if df[j].is_zero() or dg[i].is_zero() else N.mul(df[j], dg[i])
            if a.is_zero() and b.is_zero():
                continue
            terms.append(N.mul(w, N.sub(a, b)))
        return ScalarField(N.sum_exprs(terms), self.chart)

    def __call__(self, f, g):
        return self.bracket(f, g)

    def hamiltonian_vector_field(self, H) -> VectorField:
        """X_H = {H, .}."""
        return sharp(self.bivector, d(as_scalar(H, self.chart)))

    def schouten_with(self, other: "PoissonStructure"):
        return schouten_bracket(self.bivector, other.bivector)


def alpha_structure(chart=PHASE) -> PoissonStructure:
    return PoissonStructure(alpha_bivector(chart), "P_alpha")


ALPHA = alpha_structure()


def poisson_bracket_alpha(f, g) -> ScalarField:
    """{f, g}_alpha on the (q, p) chart."""
    return ALPHA.bracket(f, g)


def hamiltonian_vector_field(H, structure: PoissonStructure = None) -> VectorField:
    return (structure or ALPHA).hamiltonian_vector_field(H)
