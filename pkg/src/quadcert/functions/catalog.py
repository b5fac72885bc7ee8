"""Integrand specifications: parsed expressions and a builtin catalog."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..oracle import IntegrandSpec
from ..rule import Interval
from .expr import ExprNode, eval_jet2, parse, render

__all__ = ["FunctionSpec", "from_expression", "builtin", "convexity_probe", "BUILTINS"]


@dataclass(frozen=True)
class FunctionSpec:
    """A user-facing integrand.

    Exactly one of ``expr`` and ``builtin_id`` is set.  ``declared_convex_abs_d2``
    records what is known about convexity of ``|f''|``: True for catalog
    entries where it holds on the whole natural domain, None when unknown.
    """

    integrand: IntegrandSpec
    expr: Optional[ExprNode] = None
    builtin_id: Optional[str] = None
    declared_convex_abs_d2: Optional[bool] = None

    @property
    def label(self) -> str:
        return self.integrand.label

    def f(self, x):
        return self.integrand.f(x)

    def d2(self, x):
        return self.integrand.d2(x)


def from_expression(text: str, declared_convex_abs_d2: Optional[bool] = None) -> FunctionSpec:
    node = parse(text)

    def f(x):
        return eval_jet2(node, x).v

    def d2(x):
        return eval_jet2(node, x).d2

    return FunctionSpec(IntegrandSpec(f, d2, None, render(node)), expr=node,
                        declared_convex_abs_d2=declared_convex_abs_d2)


def _arr(x):
    return np.asarray(x, dtype=float)


def _power(n: float) -> FunctionSpec:
    n = float(n)

    def f(x):
        return _arr(x) ** n

    def d2(x):
        x = _arr(x)
        if n in (0.0, 1.0):
            return np.zeros_like(x)
        return n * (n - 1.0) * x ** (n - 2.0)

    def exact(a, b):
        if n == -1.0:
            return math.log(b) - math.log(a)
        return (b ** (n + 1.0) - a ** (n + 1.0)) / (n + 1.0)

    # x^(n-2) is convex on x > 0 unless 2 < n < 3
    convex = not (2.0 < n < 3.0)
    return FunctionSpec(IntegrandSpec(f, d2, exact, f"x^{n:g}"), builtin_id=f"power({n:g})",
                        declared_convex_abs_d2=convex)


def _reciprocal() -> FunctionSpec:
    return FunctionSpec(
        IntegrandSpec(
            lambda x: 1.0 / _arr(x),
            lambda x: 2.0 / _arr(x) ** 3,
            lambda a, b: math.log(b) - math.log(a),
            "1/x",
        ),
        builtin_id="reciprocal",
        declared_convex_abs_d2=True,
    )


def _exp() -> FunctionSpec:
    return FunctionSpec(
        IntegrandSpec(np.exp, np.exp, lambda a, b: math.exp(b) - math.exp(a), "exp(x)"),
        builtin_id="exp",
        declared_convex_abs_d2=True,
    )


def _ln() -> FunctionSpec:
    def exact(a, b):
        return (b * math.log(b) - b) - (a * math.log(a) - a)

    return FunctionSpec(
        IntegrandSpec(np.log, lambda x: -1.0 / _arr(x) ** 2, exact, "ln(x)"),
        builtin_id="ln",
        declared_convex_abs_d2=True,
    )


def _monomial_sum(coeffs: Sequence[float]) -> FunctionSpec:
    """``sum(c[k] * x**k)``."""
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("monomial-sum needs a nonempty coefficient list")
    poly = np.polynomial.Polynomial(c)
    second = poly.deriv(2)
    anti = poly.integ()
    label = " + ".join(f"{v:g}*x^{k}" for k, v in enumerate(c))
    return FunctionSpec(
        IntegrandSpec(lambda x: poly(_arr(x)), lambda x: second(_arr(x)),
                      lambda a, b: float(anti(b) - anti(a)), label),
        builtin_id=f"monomial-sum({','.join(f'{v:g}' for v in c)})",
    )


BUILTINS = ("power", "reciprocal", "exp", "ln", "monomial-sum")


def builtin(name: str, *params) -> FunctionSpec:
    """Catalog integrand with closed-form ``f''`` and exact integral.

    ``builtin("power", 4)``, ``builtin("reciprocal")``, ``builtin("exp")``,
    ``builtin("ln")``, ``builtin("monomial-sum", [1, 0, 3])``.  The name may
    also carry its parameters inline, e.g. ``"power(4)"``.
    """
    name = name.strip()
    if "(" in name and name.endswith(")"):
        name, inner = name[:-1].split("(", 1)
        params = tuple(float(p) for p in inner.split(",") if p.strip()) + params
        name = name.strip()
    if name == "power":
        if len(params) != 1:
            raise ValueError("power needs exactly one exponent")
        return _power(params[0])
    if name == "reciprocal":
        return _reciprocal()
    if name == "exp":
        return _exp()
    if name == "ln":
        return _ln()
    if name == "monomial-sum":
        if len(params) == 1 and np.ndim(params[0]) == 1:
            params = tuple(params[0])
        return _monomial_sum(params)
    raise ValueError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


def convexity_probe(g, iv: Interval, n: int = 256) -> bool:
    """Sampled midpoint-convexity test of ``g`` on ``iv``.

    Returns False as soon as some ``g(x[i+1]) > (g(x[i]) + g(x[i+2])) / 2``
    beyond a 1e-12 tolerance scaled by the largest sampled ``|g|``.  A True
    result is evidence only; an adversarial ``g`` can fool any finite sample.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    x = np.linspace(iv.a, iv.b, n + 1)
    y = np.asarray(g(x), dtype=float)
    if y.shape != x.shape:
        y = np.array([float(g(float(xi))) for xi in x])
    if not np.all(np.isfinite(y)):
        return False
    scale = float(np.max(np.abs(y)))
    excess = y[1:-1] - 0.5 * (y[:-2] + y[2:])
    return bool(np.all(excess <= 1e-12 * scale))
