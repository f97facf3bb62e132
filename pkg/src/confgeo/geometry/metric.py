"""Metric specifications over the configuration chart q1..q4."""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from ..errors import MetricError
from ..expr import nodes as N
from ..expr.domain import DomainBox
from ..expr.evaluate import evaluate_array

DIM = 4


@dataclass(frozen=True)
class MetricSpec:
    name: str
    components: tuple                 # 4x4 tuple of Expr over q1..q4
    parameters: dict = field(default_factory=dict)
    scale_factor: N.Expr | None = None
    domain: DomainBox = None
    weighting: str = "line"

    def __post_init__(self):
        comps = tuple(tuple(N.as_expr(c) for c in row) for row in self.components)
        if len(comps) != DIM or any(len(r) != DIM for r in comps):
            raise MetricError("metric must be 4x4")
        for i in range(DIM):
            for j in range(DIM):
                if comps[i][j].max_coord() >= DIM:
                    raise MetricError(f"g_{i + 1}{j + 1} uses a coordinate outside q1..q4")
                if comps[i][j] is not comps[j][i]:
                    raise MetricError(
                        f"metric is not symmetric: g_{i + 1}{j + 1} differs from g_{j + 1}{i + 1}"
                    )
        object.__setattr__(self, "components", comps)
        if self.domain is None:
            raise MetricError("metric needs a domain box")
        if self.domain.dim != DIM:
            raise MetricError("metric domain must be four-dimensional")

    def g(self, i, j):
        return self.components[i][j]

    @property
    def is_diagonal(self):
        return all(self.components[i][j].is_zero() for i in range(DIM) for j in range(DIM) if i != j)

    def matrix_at(self, points, alpha):
        """Numeric metric, shape (n, 4, 4)."""
        vals = evaluate_array(self.components, points, alpha)
        return np.moveaxis(vals, -1, 0)

    def check(self, alpha, n=20, seed=0):
        """Verify det g != 0 and Lorentzian signature (-,+,+,+) at sampled points."""
        pts = self.domain.sample(n, seed)
        G = self.matrix_at(pts, alpha)
        for p, m in zip(pts, G):
            ev = np.linalg.eigvalsh(m)
            if np.any(np.abs(ev) < 1e-300):
                raise MetricError(f"degenerate metric at {tuple(p)}")
            if not (np.sum(ev < 0) == 1 and np.sum(ev > 0) == 3):
                raise MetricError(f"signature is not (-,+,+,+) at {tuple(p)}")
        return True


def _det(m, rows, cols):
    """Laplace expansion of the minor on ``rows`` x ``cols`` (expression level)."""
    if len(rows) == 1:
        return m[rows[0]][cols[0]]
    total = N.ZERO
    r0, rest = rows[0], rows[1:]
    for k, c in enumerate(cols):
        entry = m[r0][c]
        if entry.is_zero():
            continue
        minor = _det(m, rest, cols[:k] + cols[k + 1:])
        term = N.mul(entry, minor)
        total = N.add(total, term) if k % 2 == 0 else N.sub(total, term)
    return total


def inverse_metric(spec: MetricSpec):
    """g^{mu nu} as a 4x4 tuple of Expr (1/g_ii when diagonal, cofactors otherwise)."""
    g = spec.components
    if spec.is_diagonal:
        return tuple(
            tuple(N.div(N.ONE, g[i][i]) if i == j else N.ZERO for j in range(DIM))
            for i in range(DIM)
        )
    idx = tuple(range(DIM))
    det = _det(g, idx, idx)
    inv = [[None] * DIM for _ in range(DIM)]
    for i in range(DIM):
        for j in range(DIM):
            rows = tuple(r for r in idx if r != j)
            cols = tuple(c for c in idx if c != i)
            cof = _det(g, rows, cols)
            if (i + j) % 2:
                cof = N.neg(cof)
            inv[i][j] = N.div(cof, det)
    return tuple(tuple(r) for r in inv)


def levi_civita_sign(perm):
    """Sign of a permutation given as a tuple of distinct ints."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign
