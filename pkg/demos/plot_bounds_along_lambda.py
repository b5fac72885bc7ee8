"""
Error bounds along the rule family
==================================

The three-point rule mixes the trapezoid and midpoint values with weight
``lam``.  This script walks ``lam`` across [0, 1] for ``x**4`` on [0, 1] and
prints the true gap next to both bounds, then finds the ``lam`` that makes
the first-order bound smallest.
"""

import numpy as np

from quadcert import LambdaRule, best_lambda, bound_first_order, bound_power_mean, builtin, rule_gap
from quadcert.rule import Interval

# x^4 has |f''| = 12 x^2, which is convex, so both bounds apply.
fn = builtin("power", 4)
iv = Interval(0.0, 1.0)
curv = (0.0, 12.0)

print(f"{'lam':>6} {'gap':>12} {'first':>12} {'q=2':>12} {'tight':>7}")
for lam in np.linspace(0.0, 1.0, 13):
    gap = rule_gap(fn.integrand, iv, lam)
    first = bound_first_order(iv.width, curv, lam).value
    pm = bound_power_mean(iv.width, curv, 2.0, lam).value
    print(f"{lam:6.3f} {gap:12.6f} {first:12.6f} {pm:12.6f} {abs(gap) / first:7.3f}")

# Simpson sits at lam = 1/3, where the bound is (d2a + d2b)/162.
simpson = bound_first_order(1.0, (1.0, 1.0), 1 / 3).value
print(f"\nSimpson bound for unit curvatures: {simpson:.10f} (2/162 = {2 / 162:.10f})")

# Both endpoint coefficients of the first-order bound are the same cubic in
# lam, so its minimiser is 1/sqrt(8) whatever the curvatures are.
for pair in [(1.0, 1.0), (0.0, 12.0), (5.0, 1.0)]:
    rule = best_lambda(1.0, pair)
    print(f"curvatures {pair}: best lam = {rule.lam:.6f}, bound = {bound_first_order(1.0, pair, rule).value:.6f}")
print(f"1/sqrt(8) = {1 / np.sqrt(8):.6f}")

# The power-mean bound weights the endpoints unevenly, so there the best lam
# does move with the curvature ratio.
for pair in [(1.0, 1.0), (0.0, 12.0), (5.0, 1.0)]:
    print(f"q=2, curvatures {pair}: best lam = {best_lambda(1.0, pair, q=2.0).lam:.6f}")
