"""Coordinate charts: ordered coordinate names bound to Coord indices."""

from dataclasses import dataclass

from .nodes import MAX_COORD, coord


@dataclass(frozen=True)
class Chart:
    names: tuple

    def __post_init__(self):
        if len(self.names) - 1 > MAX_COORD:
            raise ValueError("chart has more than 8 coordinates")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate coordinate names")

    @property
    def dim(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def coord(self, name):
        return coord(self.index(name))

    def coords(self):
        return tuple(coord(i) for i in range(self.dim))

    def name(self, i):
        return self.names[i]


CONFIG = Chart(("q1", "q2", "q3", "q4"))
PHASE = Chart(("q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"))
CANONICAL = Chart(("Q1", "Q2", "Q3", "Q4", "P1", "P2", "P3", "P4"))


def default_name(i):
    return PHASE.names[i]
