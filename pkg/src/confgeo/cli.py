"""confgeo command line: tensors, verify, flow.

Exit status: 0 when every reported residual is within tolerance, 1 when some
residual or drift is not (or a flow left its domain), 2 for usage and
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfGeoError

DEFAULT_SEED = 42
BUILTIN_METRICS = ("minkowski", "schwarzschild", "flrw")
SUITES = ("lemma1", "jacobi", "morphism", "noether", "schouten", "appendix", "oevel", "hierarchy", "hj",
          "bihamiltonian", "nondegeneracy", "flatness", "classical", "recursion")
# (n, tol) used when the flags are omitted
SUITE_DEFAULTS = {
    "lemma1": (100, 1e-10), "jacobi": (20, 1e-8), "morphism": (20, 1e-8), "noether": (100, 1e-9),
    "schouten": (100, 1e-9), "appendix": (100, 1e-8), "oevel": (100, 1e-9), "hierarchy": (100, 1e-9),
    "hj": (100, 1e-8), "bihamiltonian": (100, 1e-9), "nondegeneracy": (100, 1e-12),
    "flatness": (100, 1e-10), "classical": (100, 1e-9), "recursion": (100, 1e-9),
}


@dataclass
class RunConfig:
    command: str
    metric: str = "schwarzschild"
    alpha: float = 0.7
    M: float = 1.0
    k: float = 0.0
    R: str = "q1^2"
    seed: int = DEFAULT_SEED
    n: int = 100
    tol: float = 1e-9
    dt: float = 1e-3
    steps: int = 10_000
    fmt: str = "json"
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self):
        if not self.tol > 0:
            raise ConfGeoError(f"tolerance must be positive, got {self.tol}")
        if self.n < 1:
            raise ConfGeoError(f"sample count must be at least 1, got {self.n}")
        if not 0 < self.alpha <= 1:
            raise ConfGeoError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.command == "flow" and not (self.dt > 0 and self.steps >= 1):
            raise ConfGeoError("flow needs dt > 0 and steps >= 1")
        return self


def resolve_seed(flag):
    """--seed beats CONFGEO_SEED beats the default."""
    if flag is not None:
        return flag
    env = os.environ.get("CONFGEO_SEED")
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError:
            raise ConfGeoError(f"CONFGEO_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _floats(text, count=None, what="value"):
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise ConfGeoError(f"{what} must be comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise ConfGeoError(f"{what} needs {count} numbers, got {len(vals)}")
    return vals


def _num(x):
    """JSON-safe float: non-finite values become strings."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


def to_json(report):
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def load_metric(cfg: RunConfig):
    from .geometry.builtins import builtin_metric
    from .geometry.dsl import load_metric_dsl
    if cfg.metric in BUILTIN_METRICS:
        return builtin_metric(cfg.metric, M=cfg.M, k=cfg.k, scale_factor=cfg.R)
    if os.path.exists(cfg.metric):
        return load_metric_dsl(cfg.metric)
    raise ConfGeoError(f"unknown metric {cfg.metric!r}: not a builtin ({', '.join(BUILTIN_METRICS)}) "
                       "and no such file")


# tensors ------------------------------------------------------------------------------

TENSOR_OBJECTS = ("christoffel", "riemann", "ricci", "ricci_scalar", "einstein")


def cmd_tensors(cfg: RunConfig):
    from .errors import DomainError
    from .expr.chart import CONFIG
    from .expr.evaluate import evaluate_many
    from .expr.printer import to_string
    from .geometry.curvature import curvature

    spec = load_metric(cfg)
    at = cfg.extra.get("at")
    point = np.array(at if at is not None else [(lo + hi) / 2 for lo, hi in spec.domain.intervals])
    if point.shape != (4,):
        raise ConfGeoError("--at needs four coordinates")
    b = curvature(spec)
    sample = spec.domain.sample(20, cfg.seed)
    comps, zero = [], []
    for obj in TENSOR_OBJECTS:
        items = b.nonzero(obj)
        exprs = tuple(e for _, e in items)
        if exprs:
            vals = evaluate_many(exprs, point[None, :], cfg.alpha, strict=False)[:, 0]
            bad = [i for i, v in enumerate(vals) if not math.isfinite(v)]
            if bad:
                idx = ",".join(str(i + 1) for i in items[bad[0]][0])
                raise DomainError(f"{obj}[{idx}] is not finite at the evaluation point", None, tuple(point))
            # numerically vanishing objects are reported as zero
            samp = np.abs(evaluate_many(exprs, sample, cfg.alpha, strict=False))
            if np.all(np.abs(vals) < 1e-12) and np.all(samp < 1e-12):
                zero.append(obj)
                continue
        else:
            vals = ()
            zero.append(obj)
        for (idx, e), v in zip(items, vals):
            comps.append({"object": obj, "indices": [i + 1 for i in idx],
                          "expr": to_string(e, CONFIG), "value": _num(v)})
    return {
        "metric": spec.name, "alpha": cfg.alpha, "parameters": dict(spec.parameters),
        "point": [float(x) for x in point], "components": comps, "zero_objects": zero,
    }, 0


_SYMBOL = {"christoffel": "Gamma", "riemann": "R", "ricci": "Ric", "ricci_scalar": "Rs", "einstein": "G"}


def render_tensors_markdown(rep):
    lines = [f"# Curvature of {rep['metric']} (alpha = {rep['alpha']})", "",
             "Point: (" + ", ".join(repr(x) for x in rep["point"]) + ")", ""]
    for obj in TENSOR_OBJECTS:
        title = obj.replace("_", " ").capitalize()
        lines.append(f"## {title}")
        lines.append("")
        if obj in rep["zero_objects"]:
            label = "Riemann" if obj == "riemann" else title
            lines += [f"all {label} components zero", ""]
            continue
        lines += ["| component | expression | value |", "|---|---|---|"]
        for c in rep["components"]:
            if c["object"] == obj:
                idx = "".join(map(str, c["indices"]))
                lines.append(f"| {_SYMBOL[obj]}_{idx} | `{c['expr']}` | {c['value']!r} |")
        lines.append("")
    return "\n".join(lines)


# verify -------------------------------------------------------------------------------

def run_suite(cfg: RunConfig):
    s, a, n, seed, tol = cfg.extra["suite"], cfg.alpha, cfg.n, cfg.seed, cfg.tol
    if s == "lemma1":
        from .recursion.suites import lemma1_suite
        return lemma1_suite(a, n, seed, tol)
    if s == "recursion":
        from .recursion.suites import minkowski_recursion_suite
        return minkowski_recursion_suite(a, n, seed, tol)
    if s in ("jacobi", "morphism", "noether", "schouten", "bihamiltonian", "nondegeneracy"):
        from .poisson import suites as ps
        if s == "jacobi":
            return ps.jacobi_suite(a, seed, n=n, tol=tol, antisymmetry_tol=min(tol, 1e-14))
        if s == "morphism":
            return ps.morphism_suite(a, seed, n=n, tol=tol)
        return getattr(ps, f"{s}_suite")(a, n, seed, tol)
    if s == "appendix":
        from .geometry.suites import appendix_suite
        metric = cfg.extra.get("metric_given")
        if metric is None:
            metrics = (("schwarzschild", {"M": cfg.M}), ("flrw", {"k": 0}), ("flrw", {"k": 1}))
        elif metric == "schwarzschild":
            metrics = (("schwarzschild", {"M": cfg.M}),)
        elif metric == "flrw":
            ks = (cfg.k,) if cfg.extra.get("k_given") else (0, 1)
            metrics = tuple(("flrw", {"k": k}) for k in ks)
        else:
            raise ConfGeoError("the appendix suite covers the schwarzschild and flrw metrics only")
        return appendix_suite(a, n, seed, tol, metrics)
    if s == "flatness":
        from .geometry.suites import flatness_suite
        return flatness_suite(a, n, seed, tol)
    if s == "classical":
        from .geometry.suites import classical_suite
        return classical_suite(n, seed, tol, cfg.M)
    if s == "oevel":
        from .recursion.hierarchy import oevel_suite
        return oevel_suite(a, n=n, seed=seed, tol=tol)
    if s == "hierarchy":
        from .recursion.hierarchy import generalized_suite, hierarchy_suite
        return hierarchy_suite(a, n, seed, tol=tol) + generalized_suite(a, n=n, seed=seed, tol=tol)
    if s == "hj":
        from .hj import hj_suite
        return hj_suite(a, n, seed, tol, M=cfg.M, k=cfg.k, scale_factor=cfg.R)
    raise ConfGeoError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")


def cmd_verify(cfg: RunConfig):
    checks = run_suite(cfg)
    report = {
        "suite": cfg.extra["suite"], "alpha": cfg.alpha, "seed": cfg.seed, "n": cfg.n, "tol": cfg.tol,
        "results": [{"name": c.name, "max_residual": _num(c.max_residual),
                     "worst_point": [float(x) for x in c.worst_point]} for c in checks],
    }
    return report, 0 if all(c.ok for c in checks) else 1


def render_verify_markdown(rep):
    lines = [f"# verify {rep['suite']}", "",
             f"alpha = {rep['alpha']}, seed = {rep['seed']}, n = {rep['n']}, tol = {rep['tol']}", "",
             "| identity | max residual | worst point |", "|---|---|---|"]
    for r in rep["results"]:
        pt = "(" + ", ".join(f"{x:.6g}" for x in r["worst_point"]) + ")"
        res = r["max_residual"]
        lines.append(f"| {r['name']} | {res if isinstance(res, str) else format(res, '.3e')} | {pt} |")
    return "\n".join(lines) + "\n"


# flow -----------------------------------------------------------------------------------

DEFAULT_X0 = {
    "minkowski": (5.0, 1.0, 1.2, 0.8, 0.5, 0.3, 0.4, 0.2),
    "schwarzschild": (1.0, 10.0, 1.2, 1.0, -0.6, 0.3, 0.5, 0.4),
    "flrw": (2.0, 0.5, 1.2, 1.0, -1.0, 0.2, 0.3, 0.3),
}


def _named_monitors(cfg):
    from .hj import flrw_fields, schwarzschild_fields
    from .poisson.builtins import minkowski_hamiltonian
    if cfg.metric == "schwarzschild":
        f = schwarzschild_fields(cfg.M)
        return {"H": f["E_S"], "ES": f["E_S"], "a": f["a"], "K": f["K"], "G": f["G"]}
    if cfg.metric == "flrw":
        f = flrw_fields(cfg.k, cfg.R)
        return {"H": f["E_F"], "EF": f["E_F"], "K": f["K"], "L": f["L"], "G": f["G"]}
    return {"H": minkowski_hamiltonian()}


def _monitor(token, named, chart):
    from .expr.parser import parse
    from .poisson.tensors import ScalarField
    if token in named:
        return named[token]
    return ScalarField(parse(token, chart))


def cmd_flow(cfg: RunConfig):
    from . import flow as fl
    from .poisson.builtins import flrw_hamiltonian, minkowski_hamiltonian, schwarzschild_hamiltonian

    geodesic = cfg.extra.get("geodesic", False)
    x0 = cfg.extra.get("x0")
    tokens = [t for t in (cfg.extra.get("monitors") or "").split(",") if t.strip()]
    if geodesic:
        spec = load_metric(cfg)
        if x0 is None:
            raise ConfGeoError("--geodesic needs --x0 q1,q2,q3,q4,v1,v2,v3,v4")
        named = {}
        monitors = {t: _monitor(t.strip(), named, fl.GEODESIC_NAMES) for t in tokens}
        box = (fl.open_box(spec.name, M=cfg.M, k=cfg.k).intervals[:4]
               if spec.name in BUILTIN_METRICS else spec.domain.intervals)
        traj = fl.integrate_geodesic(spec, x0[:4], x0[4:], cfg.dt, cfg.steps, cfg.alpha, monitors,
                                     fl.DomainBox(tuple(box)).extended(fl.VELOCITY_BOX))
    else:
        if cfg.metric not in BUILTIN_METRICS:
            raise ConfGeoError("Hamiltonian flows need a builtin metric; use --geodesic for metric files")
        H = {"minkowski": minkowski_hamiltonian,
             "schwarzschild": lambda: schwarzschild_hamiltonian(cfg.M),
             "flrw": lambda: flrw_hamiltonian(cfg.k, cfg.R)}[cfg.metric]()
        named = _named_monitors(cfg)
        monitors = {t: _monitor(t.strip(), named, fl.PHASE_NAMES) for t in (tokens or ["H"])}
        x0 = x0 or DEFAULT_X0[cfg.metric]
        traj = fl.integrate_hamiltonian(H, x0, cfg.dt, cfg.steps, box=fl.open_box(cfg.metric, cfg.M, cfg.k),
                                        alpha=cfg.alpha, monitors=monitors)
    csv_path = cfg.extra.get("csv")
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            traj.to_csv(fh)
    drift = fl.conservation_report(traj, cfg.tol)
    ok = traj.complete and all(d.first_failure_step is None for d in drift.values())
    summary = {
        "metric": cfg.metric, "mode": "geodesic" if geodesic else "hamiltonian", "alpha": cfg.alpha,
        "dt": cfg.dt, "requested_steps": traj.requested_steps, "steps": traj.steps,
        "x0": [float(v) for v in traj.states[0]], "tol": cfg.tol,
        "halted": traj.halted, "halt_step": traj.halt_step, "csv": csv_path,
        "monitors": {k: {"max_drift": _num(d.max_drift), "relative_drift": _num(d.relative_drift),
                         "first_failure_step": d.first_failure_step} for k, d in drift.items()},
        "ok": ok,
    }
    return summary, 0 if ok else 1


def _fmt(v):
    return v if isinstance(v, str) else f"{v:.3e}"


def render_flow_markdown(rep):
    lines = [f"# flow {rep['metric']} ({rep['mode']}, alpha = {rep['alpha']})", "",
             f"dt = {rep['dt']}, steps = {rep['steps']} of {rep['requested_steps']}"]
    if rep["halted"]:
        lines.append(f"halted at step {rep['halt_step']}: {rep['halted']}")
    lines += ["", "| monitor | max drift | relative drift | first failure |", "|---|---|---|---|"]
    for k, d in rep["monitors"].items():
        step = "-" if d["first_failure_step"] is None else d["first_failure_step"]
        lines.append(f"| {k} | {_fmt(d['max_drift'])} | {_fmt(d['relative_drift'])} | {step} |")
    return "\n".join(lines) + "\n"


# entry point --------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="confgeo", description="Conformable geometry toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True, tol=True):
        sp.add_argument("--metric", default=None,
                        help="builtin name (minkowski, schwarzschild, flrw) or path to a metric file")
        sp.add_argument("--alpha", type=float, default=0.7)
        sp.add_argument("--M", type=float, default=1.0, help="Schwarzschild mass")
        sp.add_argument("--k", type=float, default=None, help="FLRW curvature index")
        sp.add_argument("--R", default="q1^2", help="FLRW scale factor, an expression in q1")
        sp.add_argument("--seed", type=int, default=None)
        if n:
            sp.add_argument("--n", type=int, default=None, help="sample count")
        if tol:
            sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--format", dest="fmt", choices=("json", "markdown"), default="json")
        sp.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")

    t = sub.add_parser("tensors", help="curvature components of a metric")
    common(t, tol=False)
    t.add_argument("--at", default=None, help="evaluation point q1,q2,q3,q4")

    v = sub.add_parser("verify", help="run a property suite")
    common(v)
    v.add_argument("--suite", required=True, choices=SUITES)

    f = sub.add_parser("flow", help="integrate a Hamiltonian or geodesic flow")
    common(f, n=False)
    f.add_argument("--x0", default=None, help="initial state, eight comma-separated numbers")
    f.add_argument("--dt", type=float, default=1e-3)
    f.add_argument("--steps", type=int, default=10_000)
    f.add_argument("--monitors", default=None,
                   help="comma-separated monitor names (H, ES, a, K, G, EF, L) or expressions")
    f.add_argument("--csv", default=None, help="trajectory CSV path")
    f.add_argument("--geodesic", action="store_true", help="integrate the rescaled geodesic system")
    return p


def config_from_args(args) -> RunConfig:
    cmd = args.command
    extra = {}
    n, tol = getattr(args, "n", None), getattr(args, "tol", None)
    if cmd == "verify":
        dn, dtol = SUITE_DEFAULTS[args.suite]
        n = dn if n is None else n
        tol = dtol if tol is None else tol
        extra.update(suite=args.suite, metric_given=args.metric, k_given=args.k is not None)
    elif cmd == "flow":
        tol = 1e-6 if tol is None else tol
        extra.update(x0=_floats(args.x0, 8, "--x0") if args.x0 else None, monitors=args.monitors,
                     csv=args.csv, geodesic=args.geodesic)
    elif cmd == "tensors":
        extra["at"] = _floats(args.at, 4, "--at") if args.at else None
    cfg = RunConfig(
        command=cmd, metric=args.metric or ("minkowski" if cmd == "tensors" else "schwarzschild"),
        alpha=args.alpha, M=args.M, k=args.k if args.k is not None else 0.0, R=args.R,
        seed=resolve_seed(args.seed), n=n if n is not None else 100, tol=tol if tol is not None else 1e-9,
        dt=getattr(args, "dt", 1e-3), steps=getattr(args, "steps", 10_000), fmt=args.fmt,
        output=args.output, extra=extra,
    )
    return cfg.validate()


_COMMANDS = {
    "tensors": (cmd_tensors, render_tensors_markdown),
    "verify": (cmd_verify, render_verify_markdown),
    "flow": (cmd_flow, render_flow_markdown),
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        run, render = _COMMANDS[cfg.command]
        report, status = run(cfg)
    except ConfGeoError as exc:
        print(f"confgeo: error: {exc}", file=sys.stderr)
        return 2
    text = to_json(report) if cfg.fmt == "json" else render(report)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
