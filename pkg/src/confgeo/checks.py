"""Result records shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    max_residual: float
    worst_point: tuple = ()
    tol: float = 1e-9
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.max_residual <= self.tol

    def as_dict(self):
        return {"name": self.name, "max_residual": float(self.max_residual),
                "worst_point": [float(x) for x in self.worst_point]}


def from_report(name, report, tol=None, note=""):
    """Check from an EqualityReport / FieldReport."""
    return Check(name, float(report.max_residual), tuple(report.worst_point),
                 report.tol if tol is None else tol, note)


def all_ok(checks):
    return all(c.ok for c in checks)
