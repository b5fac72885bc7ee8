"""Integrand definitions: expression language, jets, builtin catalog."""

from .catalog import BUILTINS, FunctionSpec, builtin, convexity_probe, from_expression
from .expr import (
    Binary,
    Const,
    ExprNode,
    ExprSyntaxError,
    Unary,
    Var,
    eval_jet2,
    evaluate,
    parse,
    render,
)
from .jet import Jet2, JetDomainError

__all__ = [
    "BUILTINS",
    "Binary",
    "Const",
    "ExprNode",
    "ExprSyntaxError",
    "FunctionSpec",
    "Jet2",
    "JetDomainError",
    "Unary",
    "Var",
    "builtin",
    "convexity_probe",
    "eval_jet2",
    "evaluate",
    "from_expression",
    "parse",
    "render",
]
