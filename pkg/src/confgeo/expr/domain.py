"""Open coordinate boxes, seeded interior sampling and numeric equality."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import nodes as N
from .evaluate import evaluate_many


@dataclass(frozen=True)
class DomainBox:
    """Product of open intervals, one per coordinate."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        for i, (lo, hi) in enumerate(ivs):
            if not lo < hi:
                raise ValueError(f"interval {i} is empty: ({lo}, {hi})")
        object.__setattr__(self, "intervals", ivs)

    @property
    def dim(self):
        return len(self.intervals)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            return False
        lo = np.array([a for a, _ in self.intervals])
        hi = np.array([b for _, b in self.intervals])
        return bool(np.all((x > lo) & (x < hi)) and np.all(np.isfinite(x)))

    def sample(self, n: int, seed: int) -> np.ndarray:
        """``n`` seeded points drawn strictly inside the box, shape (n, dim)."""
        if n < 1:
            raise ValueError("sample count must be at least 1")
        rng = np.random.default_rng(seed)
        # integers in [1, 2^53 - 1] / 2^53 lie strictly inside (0, 1)
        u = rng.integers(1, 2**53, size=(n, self.dim)) / float(2**53)
        lo = np.array([a for a, _ in self.intervals])
        hi = np.array([b for _, b in self.intervals])
        pts = lo + (hi - lo) * u
        return np.clip(pts, np.nextafter(lo, hi), np.nextafter(hi, lo))

    def with_interval(self, i, lo, hi):
        ivs = list(self.intervals)
        ivs[i] = (lo, hi)
        return DomainBox(tuple(ivs))

    def extended(self, other: "DomainBox") -> "DomainBox":
        return DomainBox(self.intervals + other.intervals)

    @staticmethod
    def uniform(dim, lo, hi):
        return DomainBox(tuple((lo, hi) for _ in range(dim)))


# default positive-orthant boxes
CONFIG_BOX = DomainBox(((0.5, 3.0),) * 4)
MOMENTUM_BOX = DomainBox(((0.2, 2.0),) * 4)
PHASE_BOX = CONFIG_BOX.extended(MOMENTUM_BOX)


@dataclass
class EqualityReport:
    equal: bool
    max_residual: float
    worst_point: tuple
    worst_values: tuple
    n: int
    tol: float
    residuals: np.ndarray = field(repr=False, default=None)

    def __bool__(self):
        return self.equal


def scaled_residual(v1, v2):
    """|v1 - v2| / (1 + max(|v1|, |v2|)), elementwise."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    return np.abs(v1 - v2) / (1.0 + np.maximum(np.abs(v1), np.abs(v2)))


def numeric_equal(e1, e2, box: DomainBox, n: int = 100, tol: float = 1e-10,
                  seed: int = 0, alpha: float = 0.7, points=None) -> EqualityReport:
    """Compare two expressions at ``n`` seeded interior points of ``box``.

    Equal iff |e1 - e2| <= tol * (1 + max(|e1|, |e2|)) everywhere.  A domain
    violation at a sampled point propagates as DomainError.
    """
    pts = box.sample(n, seed) if points is None else np.asarray(points, dtype=float)
    vals = evaluate_many((N.as_expr(e1), N.as_expr(e2)), pts, alpha)
    res = scaled_residual(vals[0], vals[1])
    j = int(np.argmax(res))
    worst = float(res[j])
    return EqualityReport(
        equal=bool(worst <= tol),
        max_residual=worst,
        worst_point=tuple(float(x) for x in pts[j]),
        worst_values=(float(vals[0, j]), float(vals[1, j])),
        n=len(pts),
        tol=tol,
        residuals=res,
    )
