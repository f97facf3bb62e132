"""Plain-text metric files.

    [meta]
    name = schwarzschild
    coordinates = q1, q2, q3, q4
    parameters = M = 1

    [domain]
    q1 = 0.5, 3

    [metric]
    g_11 = -(1 - 2*M/q2) * q1^(2*(alpha - 1))

Every slot g_MN with M <= N must be given; g_NM may be repeated and must
then agree with g_MN.  Parameters are substituted as numbers.
"""

from __future__ import annotations

import configparser
import re
from pathlib import Path

from ..errors import MetricError, ParseError
from ..expr import nodes as N
from ..expr.domain import DomainBox, numeric_equal
from ..expr.parser import parse
from .builtins import _num
from .metric import MetricSpec

_SLOT = re.compile(r"^g_([1-4])([1-4])$")


def _line_of(text, section, key):
    """1-based line of ``key`` inside ``[section]``, for error messages."""
    current = None
    for i, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
        elif current == section and s.split("=", 1)[0].strip() == key:
            return i
    return None


def _parameters(spec_text):
    out = {}
    for item in filter(None, (t.strip() for t in spec_text.split(","))):
        if "=" not in item:
            raise MetricError(f"parameter {item!r} needs a value (name = number)")
        name, value = (t.strip() for t in item.split("=", 1))
        try:
            out[name] = float(value)
        except ValueError:
            raise MetricError(f"parameter {name!r} has non-numeric value {value!r}") from None
    return out


def _interval(name, text):
    parts = [t.strip() for t in text.strip().strip("()[]").split(",")]
    try:
        lo, hi = (float(t) for t in parts)
    except ValueError:
        raise MetricError(f"domain of {name} must be 'lo, hi', got {text!r}") from None
    if not lo < hi:
        raise MetricError(f"empty domain interval for {name}: ({lo}, {hi})")
    return lo, hi


def loads_metric(text: str, source="<string>", overrides=None) -> MetricSpec:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    cp.optionxform = str
    try:
        cp.read_string(text, source)
    except configparser.Error as exc:
        raise MetricError(f"{source}: {exc}") from None
    for sec in ("meta", "domain", "metric"):
        if not cp.has_section(sec):
            raise MetricError(f"{source}: missing [{sec}] section")
    meta = cp["meta"]
    coords = [c.strip() for c in meta.get("coordinates", "q1, q2, q3, q4").split(",")]
    if len(coords) != 4 or len(set(coords)) != 4:
        raise MetricError(f"{source}: exactly four distinct coordinates are required")
    params = _parameters(meta.get("parameters", ""))
    params.update(overrides or {})
    symbols = {k: _num(v) for k, v in params.items()}

    dom = cp["domain"]
    missing = [c for c in coords if c not in dom]
    if missing:
        raise MetricError(f"{source}: no domain interval for {', '.join(missing)}")
    box = DomainBox(tuple(_interval(c, dom[c]) for c in coords))

    entries = {}
    for key, value in cp["metric"].items():
        m = _SLOT.match(key)
        if not m:
            raise MetricError(f"{source}: unknown metric entry {key!r} (expected g_MN, M, N in 1..4)")
        try:
            e = parse(value, coords, symbols)
        except ParseError as exc:
            line = _line_of(text, "metric", key)
            raise MetricError(f"{source}:{line}: in {key}: {exc}") from None
        entries[(int(m.group(1)) - 1, int(m.group(2)) - 1)] = e

    comps = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            e = entries.get((i, j))
            if e is None:
                raise MetricError(f"{source}: missing metric component g_{i + 1}{j + 1} (slot ({i + 1},{j + 1}))")
            other = entries.get((j, i))
            if other is not None and other is not e:
                rep = numeric_equal(e, other, box, n=50, tol=1e-12, alpha=0.7)
                if not rep.equal:
                    raise MetricError(f"{source}: metric is not symmetric: g_{i + 1}{j + 1} != g_{j + 1}{i + 1}")
            comps[i][j] = comps[j][i] = e
    name = meta.get("name", Path(source).stem)
    weighting = meta.get("weighting", "line")
    return MetricSpec(name, tuple(tuple(r) for r in comps), params, None, box, weighting)


def load_metric_dsl(path, overrides=None) -> MetricSpec:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise MetricError(f"cannot read metric file {path}: {exc.strerror}") from None
    return loads_metric(text, str(p), overrides)


def shipped_metric_path(name):
    from importlib import resources
    return resources.files("confgeo.data").joinpath(f"{name}.metric")
