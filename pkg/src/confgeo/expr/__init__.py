"""Expression core: immutable DAG, parser, printer, evaluator, calculus."""

from .arithmetic import alpha_add, alpha_div, alpha_mul, alpha_sub, g, g_inv
from .calculus import alpha_differential, alpha_partial, alpha_weight, diff, gradient
from .chart import CANONICAL, CONFIG, PHASE, Chart
from .domain import CONFIG_BOX, PHASE_BOX, DomainBox, EqualityReport, numeric_equal, scaled_residual
from .evaluate import evaluate, evaluate_array, evaluate_many, evaluate_points
from .nodes import (
    ALPHA_NODE, HALF, MINUS_ONE, ONE, TWO, ZERO, Expr, abs_, add, alpha, as_expr,
    const, coord, cos, cot, div, exp, ln, mul, neg, postorder, power, prod_exprs,
    sign, sin, sub, substitute, sum_exprs, tan,
)
from .parser import parse
from .printer import to_string

__all__ = [
    "ALPHA_NODE", "CANONICAL", "CONFIG", "CONFIG_BOX", "Chart", "DomainBox",
    "EqualityReport", "Expr", "HALF", "MINUS_ONE", "ONE", "PHASE", "PHASE_BOX",
    "TWO", "ZERO", "abs_", "add", "alpha", "alpha_add", "alpha_differential",
    "alpha_div", "alpha_mul", "alpha_partial", "alpha_sub", "alpha_weight",
    "as_expr", "const", "coord", "cos", "cot", "diff", "div", "evaluate",
    "evaluate_array", "evaluate_many", "evaluate_points", "exp", "g", "g_inv",
    "gradient", "ln", "mul", "neg", "numeric_equal", "parse", "postorder",
    "power", "prod_exprs", "scaled_residual", "sign", "sin", "sub",
    "substitute", "sum_exprs", "tan", "to_string",
]
