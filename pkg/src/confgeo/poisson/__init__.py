"""Phase-space tensors, the alpha-Poisson bracket and transcribed builtins."""

from .bracket import (
    ALPHA, PoissonStructure, alpha_bivector, alpha_structure, alpha_two_form, alpha_weight,
    hamiltonian_vector_field, poisson_bracket_alpha,
)
from .builtins import builtin, builtin_names
from .calculus import (
    apply, apply_tensor, compose, d, exterior_derivative, interior_product, lie_bracket,
    lie_derivative, lie_derivative_components, pair, schouten_bracket, sharp, tensor_on_bivector,
    tensor_on_form, trace,
)
from .tensors import (
    Bivector, FieldReport, OneForm, OneOneTensor, ScalarField, ThreeForm, Trivector, TwoForm,
    VectorField, as_scalar, block_matrix, diagonal_tensor, field_equal, identity_tensor,
)
