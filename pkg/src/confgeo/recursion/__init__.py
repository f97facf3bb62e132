"""Recursion operators, Nijenhuis torsion and the master-symmetry hierarchy."""

from .hierarchy import (
    HierarchyIndex, S, check_constraint, conformal_coefficients, generalized_structure,
    generalized_suite, hierarchy_suite, oevel_suite, recursion_tensor,
)
from .operators import (
    LEMMA, canonical_field, canonical_tensor, is_diagonal, lemma_field, lemma_tensor,
    minkowski_recursion, minkowski_recursion_display, minkowski_trace_display,
    nijenhuis_torsion, printed_canonical_trace, recursion_from_pair, tensor_power, trace_power,
    trace_power_numeric,
)

__all__ = [
    "HierarchyIndex", "LEMMA", "S", "canonical_field", "canonical_tensor", "check_constraint",
    "conformal_coefficients", "generalized_structure", "generalized_suite", "hierarchy_suite",
    "is_diagonal", "lemma_field", "lemma_tensor", "minkowski_recursion",
    "minkowski_recursion_display", "minkowski_trace_display", "nijenhuis_torsion",
    "oevel_suite", "printed_canonical_trace", "recursion_from_pair", "recursion_tensor",
    "tensor_power", "trace_power", "trace_power_numeric",
]
