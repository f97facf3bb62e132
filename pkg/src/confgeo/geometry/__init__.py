"""Metric specifications, curvature tensors and table conformance."""

from .appendix import calibrate_ricci_sign, conformance, conformance_summary, load_errata, load_oracle, table_metric
from .builtins import builtin_metric, flrw, minkowski, schwarzschild
from .curvature import (
    RICCI_SIGN, CurvatureBundle, christoffel, christoffel_fd, contracted_bianchi, curvature,
    einstein, ricci, ricci_scalar, riemann_lowered, riemann_symmetry_residuals,
)
from .metric import MetricSpec, inverse_metric

__all__ = [
    "RICCI_SIGN", "CurvatureBundle", "MetricSpec", "builtin_metric", "calibrate_ricci_sign",
    "christoffel", "christoffel_fd", "conformance", "conformance_summary", "contracted_bianchi",
    "curvature", "einstein", "flrw", "inverse_metric", "load_errata", "load_oracle",
    "minkowski", "ricci", "ricci_scalar", "riemann_lowered", "riemann_symmetry_residuals",
    "schwarzschild", "table_metric",
]
