"""Christoffel symbols, Riemann, Ricci, scalar curvature and Einstein tensor.

Conventions (fixed by calibration against the closed-form tables):

    Gamma^m_{n l} = 1/2 g^{m e} (d_l g_{e n} + d_n g_{e l} - d_e g_{n l})
    R^r_{s m n}   = d_m Gamma^r_{n s} - d_n Gamma^r_{m s}
                    + Gamma^r_{m l} Gamma^l_{n s} - Gamma^r_{n l} Gamma^l_{m s}
    R_{r s m n}   = g_{r k} R^k_{s m n}
    R_{i j}       = RICCI_SIGN * R^k_{i k j},  RICCI_SIGN = -1
    scalar        = g^{i j} R_{i j}
    G_{i j}       = R_{i j} - 1/2 g_{i j} scalar
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..expr import nodes as N
from ..expr.calculus import diff
from ..expr.evaluate import evaluate_array
from .metric import DIM, MetricSpec, inverse_metric

RICCI_SIGN = -1
RIEMANN_CONVENTION = (
    "R^r_{smn} = d_m G^r_{ns} - d_n G^r_{ms} + G^r_{ml} G^l_{ns} - G^r_{nl} G^l_{ms}; "
    "R_{rsmn} = g_{rk} R^k_{smn}"
)

_R = range(DIM)


def _sum(terms):
    return N.sum_exprs(t for t in terms if not t.is_zero())


def christoffel(spec: MetricSpec, ginv=None):
    """Gamma[m][n][l] = Gamma^m_{n l}, symmetric in (n, l)."""
    g = spec.components
    ginv = ginv or inverse_metric(spec)
    dg = [[[diff(g[a][b], c) for c in _R] for b in _R] for a in _R]
    gam = [[[N.ZERO] * DIM for _ in _R] for _ in _R]
    for m in _R:
        for n in _R:
            for l in range(n, DIM):
                terms = []
                for e in _R:
                    if ginv[m][e].is_zero():
                        continue
                    bracket = N.sub(N.add(dg[e][n][l], dg[e][l][n]), dg[n][l][e])
                    if bracket.is_zero():
                        continue
                    terms.append(N.mul(ginv[m][e], bracket))
                val = N.mul(N.HALF, _sum(terms))
                gam[m][n][l] = val
                gam[m][l][n] = val
    return tuple(tuple(tuple(r) for r in plane) for plane in gam)


def riemann_upper(gam):
    """Rup[r][s][m][n] = R^r_{s m n}."""
    out = [[[[N.ZERO] * DIM for _ in _R] for _ in _R] for _ in _R]
    for r in _R:
        for s in _R:
            for m in _R:
                for n in range(m + 1, DIM):
                    terms = [diff(gam[r][n][s], m), N.neg(diff(gam[r][m][s], n))]
                    for l in _R:
                        terms.append(N.mul(gam[r][m][l], gam[l][n][s]))
                        terms.append(N.neg(N.mul(gam[r][n][l], gam[l][m][s])))
                    val = _sum(terms)
                    out[r][s][m][n] = val
                    out[r][s][n][m] = N.neg(val)
    return out


def lower_riemann(spec, rup):
    g = spec.components
    out = [[[[N.ZERO] * DIM for _ in _R] for _ in _R] for _ in _R]
    for r in _R:
        for s in _R:
            for m in _R:
                for n in _R:
                    out[r][s][m][n] = _sum(N.mul(g[r][k], rup[k][s][m][n]) for k in _R if not g[r][k].is_zero())
    return out


def contract_ricci(rup, sign=RICCI_SIGN):
    out = [[N.ZERO] * DIM for _ in _R]
    for i in _R:
        for j in _R:
            val = _sum(rup[k][i][k][j] for k in _R)
            out[i][j] = N.neg(val) if sign < 0 else val
    return out


@dataclass
class CurvatureBundle:
    spec: MetricSpec
    inverse: tuple
    christoffel: tuple
    riemann_up: list
    riemann_lowered: list
    ricci: list
    ricci_scalar: N.Expr
    einstein: list
    metadata: dict = field(default_factory=dict)

    def component(self, obj, idx):
        """Look up a component by object name and 0-based index tuple."""
        if obj == "christoffel":
            return self.christoffel[idx[0]][idx[1]][idx[2]]
        if obj == "riemann":
            return self.riemann_lowered[idx[0]][idx[1]][idx[2]][idx[3]]
        if obj == "ricci":
            return self.ricci[idx[0]][idx[1]]
        if obj == "ricci_scalar":
            return self.ricci_scalar
        if obj == "einstein":
            return self.einstein[idx[0]][idx[1]]
        raise KeyError(obj)

    def nonzero(self, obj):
        """(index, expr) pairs of structurally nonzero independent components."""
        out = []
        if obj == "christoffel":
            for m in _R:
                for n in _R:
                    for l in range(n, DIM):
                        e = self.christoffel[m][n][l]
                        if not e.is_zero():
                            out.append(((m, n, l), e))
        elif obj == "riemann":
            for r in _R:
                for s in range(r + 1, DIM):
                    for m in _R:
                        for n in range(m + 1, DIM):
                            if (r, s) > (m, n):
                                continue
                            e = self.riemann_lowered[r][s][m][n]
                            if not e.is_zero():
                                out.append(((r, s, m, n), e))
        elif obj in ("ricci", "einstein"):
            arr = self.ricci if obj == "ricci" else self.einstein
            for i in _R:
                for j in range(i, DIM):
                    if not arr[i][j].is_zero():
                        out.append(((i, j), arr[i][j]))
        elif obj == "ricci_scalar":
            if not self.ricci_scalar.is_zero():
                out.append(((), self.ricci_scalar))
        return out


def curvature(spec: MetricSpec, ricci_sign=RICCI_SIGN) -> CurvatureBundle:
    ginv = inverse_metric(spec)
    gam = christoffel(spec, ginv)
    rup = riemann_upper(gam)
    rlow = lower_riemann(spec, rup)
    ric = contract_ricci(rup, ricci_sign)
    scal = _sum(N.mul(ginv[i][j], ric[i][j]) for i in _R for j in _R if not ginv[i][j].is_zero())
    g = spec.components
    ein = [[N.sub(ric[i][j], N.mul(N.HALF, N.mul(g[i][j], scal))) for j in _R] for i in _R]
    meta = {
        "riemann_convention": RIEMANN_CONVENTION,
        "ricci_contraction": "R_ij = sign * R^k_{ikj}",
        "ricci_sign": ricci_sign,
        "weighting": spec.weighting,
    }
    return CurvatureBundle(spec, ginv, gam, rup, rlow, ric, scal, ein, meta)


# operation-level wrappers ----------------------------------------------------------

def riemann_lowered(spec):
    return curvature(spec).riemann_lowered


def ricci(spec):
    return curvature(spec).ricci


def ricci_scalar(spec):
    return curvature(spec).ricci_scalar


def einstein(spec):
    return curvature(spec).einstein


# numeric checks ---------------------------------------------------------------------

def riemann_symmetry_residuals(bundle, points, alpha):
    """Max residuals of antisymmetry, pair symmetry and the first Bianchi identity."""
    R = evaluate_array(bundle.riemann_lowered, points, alpha)
    scale = 1.0 + np.abs(R)
    anti1 = np.max(np.abs(R + R.transpose(1, 0, 2, 3, 4)) / scale)
    anti2 = np.max(np.abs(R + R.transpose(0, 1, 3, 2, 4)) / scale)
    pair = np.max(np.abs(R - R.transpose(2, 3, 0, 1, 4)) / scale)
    bianchi = R + R.transpose(0, 2, 3, 1, 4) + R.transpose(0, 3, 1, 2, 4)
    first = np.max(np.abs(bianchi) / (1.0 + np.max(np.abs(R))))
    return {"antisym_ij": float(anti1), "antisym_kl": float(anti2),
            "pair": float(pair), "bianchi_1": float(first)}


def contracted_bianchi(bundle):
    """Expressions div_j = nabla_i G^i_j, which vanish identically."""
    ginv, gam, ein = bundle.inverse, bundle.christoffel, bundle.einstein
    mixed = [[_sum(N.mul(ginv[i][k], ein[k][j]) for k in _R if not ginv[i][k].is_zero())
              for j in _R] for i in _R]
    out = []
    for j in _R:
        terms = [diff(mixed[i][j], i) for i in _R]
        for i in _R:
            for k in _R:
                terms.append(N.mul(gam[i][i][k], mixed[k][j]))
                terms.append(N.neg(N.mul(gam[k][i][j], mixed[i][k])))
        out.append(_sum(terms))
    return out


def christoffel_fd(spec, point, alpha, h=1e-6):
    """Christoffel symbols from central differences of the numeric metric."""
    x = np.asarray(point, dtype=float)
    g0 = spec.matrix_at(x[None, :], alpha)[0]
    ginv = np.linalg.inv(g0)
    dg = np.empty((DIM, DIM, DIM))           # dg[a, b, c] = d_c g_ab
    for c in _R:
        step = np.zeros(DIM)
        step[c] = h * max(1.0, abs(x[c]))
        gp = spec.matrix_at((x + step)[None, :], alpha)[0]
        gm = spec.matrix_at((x - step)[None, :], alpha)[0]
        dg[:, :, c] = (gp - gm) / (2 * step[c])
    bracket = dg.transpose(0, 1, 2) + dg.transpose(0, 2, 1) - dg.transpose(2, 0, 1)
    # bracket[e, n, l] = d_l g_en + d_n g_el - d_e g_nl
    return 0.5 * np.einsum("me,enl->mnl", ginv, bracket)
