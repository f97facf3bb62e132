"""Fixed-step RK4 for Hamiltonian flows and the rescaled geodesic equation.

Integration halts, keeping the partial trajectory, as soon as a state leaves
its open box or stops being finite.  The |x|^(alpha-1) singularities and the
horizon are never crossed silently.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfGeoError
from .expr import nodes as N
from .expr.domain import DomainBox
from .expr.evaluate import compile_scalar, evaluate_many
from .poisson.bracket import ALPHA, PoissonStructure
from .poisson.tensors import ScalarField, VectorField, as_scalar

PHASE_NAMES = ("q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4")
GEODESIC_NAMES = ("q1", "q2", "q3", "q4", "v1", "v2", "v3", "v4")
VELOCITY_BOX = DomainBox(((-1e8, 1e8),) * 4)


@dataclass
class Trajectory:
    t0: float
    dt: float
    states: np.ndarray                   # (m, 8), row 0 is the initial state
    alpha: float
    names: tuple = PHASE_NAMES
    monitors: dict = field(default_factory=dict)
    halted: str | None = None            # reason, if integration stopped early
    halt_step: int | None = None
    requested_steps: int = 0

    @property
    def steps(self):
        return len(self.states) - 1

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(len(self.states))

    @property
    def complete(self):
        return self.halted is None

    def add_monitor(self, name, f):
        """Evaluate a scalar field at every stored state."""
        e = as_scalar(f).expr
        self.monitors[name] = evaluate_many((e,), self.states, self.alpha, strict=False)[0]
        return self.monitors[name]

    def to_csv(self, fh=None):
        """Header t,<coords>,<monitors>; repr floats round-trip exactly."""
        out = fh or io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        names = list(self.monitors)
        w.writerow(["t", *self.names, *names])
        cols = [self.monitors[n] for n in names]
        for i, (t, x) in enumerate(zip(self.times, self.states)):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in x] +
                       [repr(float(c[i])) for c in cols])
        return out.getvalue() if fh is None else None


def _rk4(rhs, x0, dt, n, box, alpha):
    xs = [np.asarray(x0, dtype=float)]
    if not box.contains(xs[0]):
        raise ConfGeoError(f"initial state {tuple(float(v) for v in xs[0])} is outside the domain box")
    x = list(xs[0])
    h2 = dt / 2.0
    for step in range(1, n + 1):
        k1 = rhs(x, alpha)
        k2 = rhs([a + h2 * b for a, b in zip(x, k1)], alpha)
        k3 = rhs([a + h2 * b for a, b in zip(x, k2)], alpha)
        k4 = rhs([a + dt * b for a, b in zip(x, k3)], alpha)
        x = [a + dt / 6.0 * (b + 2.0 * c + 2.0 * d + e) for a, b, c, d, e in zip(x, k1, k2, k3, k4)]
        if not all(math.isfinite(v) for v in x):
            return np.array(xs), "non-finite state", step
        if not box.contains(x):
            return np.array(xs), "left the domain box", step
        xs.append(np.array(x))
    return np.array(xs), None, None


def _attach(traj, monitors):
    items = monitors.items() if isinstance(monitors, dict) else \
        ((f"m{i}", m) for i, m in enumerate(monitors or ()))
    for name, m in items:
        traj.add_monitor(name, m)
    return traj


def integrate_field(X: VectorField, x0, dt=1e-3, n=10_000, box: DomainBox = None, alpha=0.7,
                    monitors=None, t0=0.0, names=PHASE_NAMES) -> Trajectory:
    """RK4 on x' = X(x)."""
    if not dt > 0:
        raise ConfGeoError("dt must be positive")
    if box is None:
        raise ConfGeoError("a domain box is required")
    rhs = compile_scalar(tuple(X[i] for i in range(8)))
    states, why, step = _rk4(rhs, x0, dt, int(n), box, alpha)
    traj = Trajectory(t0, dt, states, alpha, names, halted=why, halt_step=step, requested_steps=int(n))
    return _attach(traj, monitors)


def integrate_hamiltonian(H, x0, dt=1e-3, n=10_000, structure: PoissonStructure = None,
                          box: DomainBox = None, alpha=0.7, monitors=None, t0=0.0) -> Trajectory:
    """Flow of X = {H, .} under ``structure`` (the alpha-bracket by default)."""
    X = (structure or ALPHA).hamiltonian_vector_field(H)
    return integrate_field(X, x0, dt, n, box, alpha, monitors, t0)


def geodesic_field(spec) -> VectorField:
    """q' = v,  v'^m = -(1/(alpha+1)) Gamma^m_{nl} v^n v^l  on the (q, v) chart."""
    from .geometry.curvature import christoffel
    gam = christoffel(spec)
    v = [N.coord(4 + i) for i in range(4)]
    c = N.neg(N.div(N.ONE, N.add(N.ALPHA_NODE, N.ONE)))
    comps = list(v)
    for m in range(4):
        terms = [N.prod_exprs([gam[m][a][b], v[a], v[b]])
                 for a in range(4) for b in range(4) if not gam[m][a][b].is_zero()]
        comps.append(N.mul(c, N.sum_exprs(terms)) if terms else N.ZERO)
    return VectorField(comps)


def integrate_geodesic(spec, q0, v0, dt=1e-3, n=10_000, alpha=0.7, monitors=None,
                       box: DomainBox = None, t0=0.0) -> Trajectory:
    """RK4 on the rescaled geodesic system; the state is (q, v)."""
    box = box or spec.domain.extended(VELOCITY_BOX)
    x0 = list(q0) + list(v0)
    return integrate_field(geodesic_field(spec), x0, dt, n, box, alpha, monitors, t0, GEODESIC_NAMES)


# conservation -------------------------------------------------------------------

@dataclass
class Drift:
    max_drift: float
    relative_drift: float
    first_failure_step: int | None


def conservation_report(traj: Trajectory, tol=1e-6) -> dict:
    """Per monitor: max |m(t) - m(0)|, that over max(1, |m(0)|), and the first step exceeding tol."""
    if len(traj.states) == 0:
        raise ConfGeoError("empty trajectory")
    out = {}
    for name, vals in traj.monitors.items():
        dev = np.abs(vals - vals[0])
        scale = max(1.0, abs(float(vals[0])))
        rel = dev / scale
        bad = np.nonzero(~(rel <= tol))[0]
        out[name] = Drift(float(dev.max()), float(rel.max()), int(bad[0]) if len(bad) else None)
    return out


def convergence_order(X: VectorField, x0, box, alpha=0.7, dts=(2e-3, 1e-3, 5e-4), t_end=2.0):
    """Observed RK4 order from successive differences of the final states.

    With d1 = |x(dt1) - x(dt2)| and d2 = |x(dt2) - x(dt3)| for halving steps,
    the order is log2(d1 / d2).
    """
    finals = []
    for dt in dts:
        n = int(round(t_end / dt))
        tr = integrate_field(X, x0, dt, n, box, alpha)
        if not tr.complete:
            raise ConfGeoError(f"convergence run halted at dt={dt}: {tr.halted}")
        finals.append(tr.states[-1])
    d1 = float(np.max(np.abs(finals[0] - finals[1])))
    d2 = float(np.max(np.abs(finals[1] - finals[2])))
    ratio = dts[0] / dts[1]
    return math.log(d1 / d2) / math.log(ratio), (d1, d2)


def minkowski_crosscheck(alpha=0.7, dt=1e-3, n=1000, q0=(5.0, 1.0, 1.2, 0.8), v0=(-0.5, 0.3, 0.4, 0.2)):
    """Geodesic (q, v) versus Hamiltonian (q, p) with p = eps v, eps = diag(-1, 1, 1, 1).

    Returns the max absolute difference of the two trajectories in (q, v) form.
    """
    from .geometry.builtins import minkowski
    from .poisson.builtins import minkowski_hamiltonian
    eps = np.array([-1.0, 1.0, 1.0, 1.0])
    gbox = DomainBox(((0.1, 50.0),) * 4 + ((-50.0, -1e-3),) + ((1e-3, 50.0),) * 3)
    g = integrate_geodesic(minkowski(), q0, v0, dt, n, alpha, box=gbox)
    p0 = eps * np.asarray(v0)
    hbox = DomainBox(((0.1, 50.0),) * 4 + ((1e-3, 50.0),) * 4)
    h = integrate_hamiltonian(minkowski_hamiltonian(), list(q0) + list(p0), dt, n, box=hbox, alpha=alpha)
    if not (g.complete and h.complete):
        raise ConfGeoError("cross-check trajectory left its box")
    hv = h.states.copy()
    hv[:, 4:] *= eps
    return float(np.max(np.abs(g.states - hv))), g, h



def open_box(metric, M=1.0, k=0.0, bound=1e3) -> DomainBox:
    """Phase box excluding only the singular sets: q = 0, the horizon, sin q3 = 0, k q2^2 = 1."""
    lo = 1e-3
    mom = ((-bound, bound),) * 4
    if metric == "minkowski":
        return DomainBox(((lo, bound),) * 4 + mom)
    if metric == "schwarzschild":
        return DomainBox(((lo, bound), (2 * M * (1 + 1e-4), bound), (lo, math.pi - lo), (lo, bound)) + mom)
    if metric == "flrw":
        hi = (1 - 1e-3) / math.sqrt(k) if k > 0 else bound
        return DomainBox(((lo, bound), (lo, hi), (lo, math.pi - lo), (lo, bound)) + mom)
    raise ConfGeoError(f"no open box for metric {metric!r}")
