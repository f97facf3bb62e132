"""Conformable arithmetic built on the map g(z) = |z|^(alpha-1) z."""

from __future__ import annotations

import math

from ..errors import DomainError


def _check_alpha(alpha):
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")


def g(z: float, alpha: float) -> float:
    _check_alpha(alpha)
    if z == 0:
        return 0.0
    return math.copysign(abs(z) ** alpha, z)


def g_inv(y: float, alpha: float) -> float:
    _check_alpha(alpha)
    if y == 0:
        return 0.0
    return math.copysign(abs(y) ** (1.0 / alpha), y)


def alpha_add(a: float, b: float, alpha: float) -> float:
    return g_inv(g(a, alpha) + g(b, alpha), alpha)


def alpha_sub(a: float, b: float, alpha: float) -> float:
    return g_inv(g(a, alpha) - g(b, alpha), alpha)


def alpha_mul(a: float, b: float, alpha: float) -> float:
    # g is multiplicative, so g^-1(g(a) g(b)) = a b
    _check_alpha(alpha)
    return a * b


def alpha_div(a: float, b: float, alpha: float) -> float:
    _check_alpha(alpha)
    if b == 0:
        raise DomainError("alpha-division by zero")
    return a / b
