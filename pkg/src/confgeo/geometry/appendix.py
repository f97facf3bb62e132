"""Conformance of the curvature pipeline against the closed-form tables.

The tables ship as ``data/appendix_oracle.txt`` (verbatim transcription) and
``data/appendix_errata.txt`` (entries known to disagree, with a corrected
expression where a local repair exists).  A conformance run passes when the
set of mismatching entries equals the documented set and every corrected
expression matches the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from ..errors import ConfGeoError
from ..expr import nodes as N
from ..expr.calculus import diff
from ..expr.domain import numeric_equal
from ..expr.parser import parse
from .builtins import _num, flrw, schwarzschild
from .curvature import contract_ricci, curvature

CONFIG_NAMES = ("q1", "q2", "q3", "q4")


@dataclass(frozen=True)
class OracleEntry:
    metric: str
    table: str
    obj: str
    indices: tuple          # 0-based
    text: str

    @property
    def key(self):
        return (self.metric, self.obj, self.indices)

    def label(self):
        idx = ",".join(str(i + 1) for i in self.indices) or "-"
        return f"{self.metric}:{self.obj}[{idx}]"


@dataclass(frozen=True)
class Erratum:
    metric: str
    obj: str
    indices: tuple
    status: str             # "corrected" or "unresolved"
    corrected: str | None
    analysis: str

    @property
    def key(self):
        return (self.metric, self.obj, self.indices)


@dataclass
class EntryResult:
    entry: OracleEntry
    max_residual: float
    worst_point: tuple
    matches: bool
    documented: bool
    corrected_residual: float | None = None
    tol: float = 1e-8

    @property
    def ok(self):
        if self.documented:
            if self.matches:
                return False        # stale erratum
            return self.corrected_residual is None or self.corrected_residual <= self.tol
        return self.matches


def _indices(field):
    field = field.strip()
    if field in ("", "-"):
        return ()
    return tuple(int(t) - 1 for t in field.split(","))


def _lines(name):
    text = resources.files("confgeo.data").joinpath(name).read_text()
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line


def load_oracle():
    out = []
    for line in _lines("appendix_oracle.txt"):
        parts = [p.strip() for p in line.split("|", 4)]
        if len(parts) != 5:
            raise ConfGeoError(f"malformed oracle line: {line!r}")
        out.append(OracleEntry(parts[0], parts[1], parts[2], _indices(parts[3]), parts[4]))
    return out


def load_errata():
    out = {}
    for line in _lines("appendix_errata.txt"):
        parts = [p.strip() for p in line.split("|", 5)]
        if len(parts) != 6:
            raise ConfGeoError(f"malformed errata line: {line!r}")
        metric, obj, idx, status, corr, note = parts
        if status not in ("corrected", "unresolved"):
            raise ConfGeoError(f"unknown errata status {status!r}")
        e = Erratum(metric, obj, _indices(idx), status, None if corr == "-" else corr, note)
        out[e.key] = e
    return out


def oracle_symbols(spec):
    """Bind the table symbols (M, k, R, dR, ddR) for a concrete metric."""
    if spec.name == "schwarzschild":
        return {"M": _num(spec.parameters["M"])}
    if spec.name == "flrw":
        R = N.power(spec.scale_factor, N.TWO)
        dR = diff(R, 0)
        return {"k": _num(spec.parameters["k"]), "R": R, "dR": dR, "ddR": diff(dR, 0)}
    return {}


def parse_entry(text, spec):
    return parse(text, CONFIG_NAMES, oracle_symbols(spec))


def conformance(spec, alpha=0.7, n=100, tol=1e-8, seed=0, bundle=None):
    """Compare every table entry for ``spec.name`` with the pipeline.

    ``spec`` must use the weighting the tables were computed with
    ("conformable").  Returns a list of EntryResult.
    """
    bundle = bundle or curvature(spec)
    errata = load_errata()
    pts = spec.domain.sample(n, seed)
    results = []
    for entry in load_oracle():
        if entry.metric != spec.name:
            continue
        ours = bundle.component(entry.obj, entry.indices)
        theirs = parse_entry(entry.text, spec)
        rep = numeric_equal(ours, theirs, spec.domain, tol=tol, alpha=alpha, points=pts)
        err = errata.get(entry.key)
        corr_res = None
        if err is not None and err.corrected is not None:
            fixed = parse_entry(err.corrected, spec)
            corr_res = numeric_equal(ours, fixed, spec.domain, tol=tol, alpha=alpha,
                                     points=pts).max_residual
        results.append(EntryResult(entry, rep.max_residual, rep.worst_point, rep.equal,
                                   err is not None, corr_res, tol))
    return results


def conformance_summary(results, strict_stale=True):
    """Mismatch set vs documented set; ``passed`` iff they agree and repairs hold.

    Several errata vanish at special parameter values (alpha = 1, k = 0), where
    the faulty entry coincides with the pipeline.  ``strict_stale=False``
    tolerates such inactive errata.
    """
    mismatched = {r.entry.key for r in results if not r.matches}
    documented = {r.entry.key for r in results if r.documented}
    bad_repair = [r.entry.label() for r in results
                  if r.documented and r.corrected_residual is not None
                  and r.corrected_residual > r.tol]
    return {
        "entries": len(results),
        "mismatched": sorted(mismatched),
        "undocumented": sorted(mismatched - documented),
        "stale_errata": sorted(documented - mismatched),
        "failed_repairs": bad_repair,
        "passed": (not (mismatched - documented) and not bad_repair
                   and (not strict_stale or not (documented - mismatched))),
    }


def table_metric(name, **params):
    """The builtin metric in the weighting used by the tables."""
    if name == "schwarzschild":
        return schwarzschild(params.get("M", 1), weighting="conformable")
    if name == "flrw":
        return flrw(params.get("k", 0), params.get("scale_factor", "q1^2"),
                    weighting="conformable")
    raise ConfGeoError(f"no closed-form tables for {name!r}")


def calibrate_ricci_sign(alpha=0.7, n=20, seed=0):
    """Sign s such that s * R^k_{ikj} reproduces the tabulated Ricci entries.

    Uses the Schwarzschild entries that are not in the errata register.
    """
    spec = table_metric("schwarzschild")
    bundle = curvature(spec, ricci_sign=1)
    raw = contract_ricci(bundle.riemann_up, 1)
    errata = load_errata()
    pts = spec.domain.sample(n, seed)
    votes = set()
    for entry in load_oracle():
        if entry.metric != "schwarzschild" or entry.obj != "ricci" or entry.key in errata:
            continue
        i, j = entry.indices
        ref = parse_entry(entry.text, spec)
        for s in (1, -1):
            cand = raw[i][j] if s > 0 else N.neg(raw[i][j])
            if numeric_equal(cand, ref, spec.domain, tol=1e-8, alpha=alpha, points=pts):
                votes.add(s)
    if len(votes) != 1:
        raise ConfGeoError(f"Ricci sign calibration is ambiguous: {sorted(votes)}")
    return votes.pop()
