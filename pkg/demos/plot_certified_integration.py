"""
Certified composite integration
===============================

``integrate_certified`` bisects the cell with the largest bound until the
summed bounds drop below the tolerance.  The result carries a guarantee
whenever ``|f''|`` is convex on the interval.
"""

import math

from quadcert import integrate_certified, integrate_uniform
from quadcert.functions import builtin, from_expression
from quadcert.rule import Interval

# A user expression; the convexity of |f''| is checked by sampling.
fn = from_expression("exp(x) + x^4")
iv = Interval(0.0, 2.0)
exact = math.exp(2) - 1 + 32 / 5

for tol in (1e-3, 1e-6, 1e-8):
    cert = integrate_certified(fn, iv, tol, lam=1 / 3)
    print(f"tol {tol:.0e}: cells {cert.n_cells:6d}  error {abs(cert.value - exact):.2e}  bound {cert.total_bound:.2e}")

# Choosing lam per cell minimises each cell's bound.  For the first-order
# bound that choice is 1/sqrt(8) on every cell, a little better than Simpson.
auto = integrate_certified(fn, iv, 1e-8, lam="auto")
print(f"per-cell best lam: {auto.n_cells} cells, error {abs(auto.value - exact):.2e}")

# Uniform refinement divides the bound by four per level.
fn4 = builtin("power", 4)
prev = None
for k in range(1, 7):
    bound = integrate_uniform(fn4, Interval(0, 1), 2**k, lam=1 / 3).total_bound
    ratio = "" if prev is None else f"  ratio {prev / bound:.3f}"
    print(f"{2**k:3d} cells: bound {bound:.3e}{ratio}")
    prev = bound

# sin has a non-convex |f''| on [0, 6], so the engine refuses it.
try:
    integrate_certified(from_expression("sin(x)"), Interval(0, 6), 1e-6)
except ValueError as exc:
    print("sin(x) on [0, 6]:", exc)
