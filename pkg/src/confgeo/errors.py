"""Exception hierarchy shared by all confgeo modules."""


class ConfGeoError(Exception):
    """Base class for every error raised by the package."""


class ParseError(ConfGeoError):
    def __init__(self, message, line=1, column=1, text=None):
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"line {line}, column {column}: {message}")


class DomainError(ConfGeoError):
    """A value left the open domain: zero coordinate, pole, log of a nonpositive."""

    def __init__(self, message, subexpr=None, point=None):
        self.subexpr = subexpr
        self.point = point
        detail = message
        if subexpr is not None:
            text = str(subexpr)
            if len(text) > 200:
                text = text[:197] + "..."
            detail += f" in subexpression {text}"
        if point is not None:
            detail += f" at point {tuple(float(x) for x in point)}"
        super().__init__(detail)


class ConstraintError(ConfGeoError):
    """Parameter constraint violated, e.g. 1 - (k+1)*alpha = 0."""


class MetricError(ConfGeoError):
    """Ill-formed metric specification."""
