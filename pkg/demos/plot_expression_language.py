"""
The expression language and second-derivative jets
===================================================

Integrands can be written as text.  Parsing yields a small tree; evaluating
it on jets gives the value and the first two derivatives in one pass.
"""

import numpy as np

from quadcert.functions import ExprSyntaxError, convexity_probe, eval_jet2, parse, render
from quadcert.rule import Interval

tree = parse("exp(x) - 3*x^2 + ln(1 + x)")
print(tree)
print("rendered:", render(tree))

# Jets work on scalars and arrays alike.
x = np.linspace(0.0, 1.0, 5)
j = eval_jet2(tree, x)
for xi, v, d1, d2 in zip(x, j.v, j.d1, j.d2):
    print(f"x={xi:.2f}  f={v:+.6f}  f'={d1:+.6f}  f''={d2:+.6f}")

# Errors point at the offending byte.
for text in ["2 * (x + 1", "x^x", "cosh(x)"]:
    try:
        parse(text)
    except ExprSyntaxError as exc:
        print(f"{text!r}: {exc}")

# The convexity probe samples |f''| and tests midpoint convexity.
for text, iv in [("x^4", Interval(0, 1)), ("1/x", Interval(1, 2)), ("sin(x)", Interval(0, 6))]:
    node = parse(text)
    ok = convexity_probe(lambda t, node=node: np.abs(eval_jet2(node, t).d2), iv)
    print(f"|f''| of {text} convex on [{iv.a}, {iv.b}]: {ok}")
