"""Certified three-point quadrature.

The rule ``lam * (f(a) + f(b)) / 2 + (1 - lam) * f((a + b) / 2)`` spans the
midpoint (``lam = 0``), Simpson (``lam = 1/3``) and trapezoid (``lam = 1``)
rules.  For integrands with convex ``|f''|`` its error admits closed-form
bounds, which this package evaluates, checks against a brute-force oracle and
uses to certify composite integration.
"""

from .composite import Certificate, Cell, ConvexityError, Policy, integrate_certified, integrate_uniform
from .functions import FunctionSpec, builtin, convexity_probe, eval_jet2, from_expression, parse
from .oracle import IntegrandSpec, reference_integral, rule_gap
from .rule import (
    MIDPOINT,
    SIMPSON,
    TRAPEZOID,
    DomainError,
    EndpointCurvature,
    ErrorBound,
    Interval,
    LambdaRule,
    Regime,
    abs_kernel_mass,
    best_lambda,
    bound_first_order,
    bound_power_mean,
    kernel_k,
    moment_coefficients,
    rule_value,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Cell",
    "ConvexityError",
    "DomainError",
    "EndpointCurvature",
    "ErrorBound",
    "FunctionSpec",
    "IntegrandSpec",
    "Interval",
    "LambdaRule",
    "MIDPOINT",
    "Policy",
    "Regime",
    "SIMPSON",
    "TRAPEZOID",
    "abs_kernel_mass",
    "best_lambda",
    "bound_first_order",
    "bound_power_mean",
    "builtin",
    "convexity_probe",
    "eval_jet2",
    "from_expression",
    "integrate_certified",
    "integrate_uniform",
    "kernel_k",
    "moment_coefficients",
    "parse",
    "reference_integral",
    "rule_gap",
    "rule_value",
]
