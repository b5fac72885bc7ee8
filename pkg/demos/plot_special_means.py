"""
Special means and their inequalities
====================================

Applying the rule bounds to ``x**n`` and ``1/x`` gives inequalities between
the classical means of two positive numbers.
"""

import numpy as np

from quadcert import means

a, b = 1.0, 2.0
for name, fn in [("H", means.harmonic), ("G", means.geometric), ("L", means.logarithmic),
                 ("I", means.identric), ("A", means.arithmetic)]:
    print(f"{name}({a}, {b}) = {fn(a, b):.12f}")

# L_p increases with p and passes through L at p = -1 and I at p = 0.
for p in (-5, -2, -1.001, -0.999, -0.5, -0.001, 0.001, 0.5, 1, 2, 5):
    print(f"L_{p}({a}, {b}) = {means.p_logarithmic(a, b, p):.8f}")

# Simpson on x^n: the gap against its bound, with both constants.
for n in (3, 4, 6):
    res = means.prop1_gap(n, a, b)
    print(f"n={n}: gap {res.gap:.3e}  bound(1/162) {res.bound:.3e}  bound(1/168) {means.prop1_bound_168(n, a, b):.3e}")

# Midpoint, trapezoid and Simpson on 1/x, over a few exponents q.
for q in (1.0, 2.0, 3.0):
    p2, p3 = means.prop2_gaps(a, b, q), means.prop3_gap(a, b, q)
    print(f"q={q}: mid {p2.mid_gap:.4e}<={p2.mid_bound:.4e}  trap {p2.trap_gap:.4e}<={p2.trap_bound:.4e}"
          f"  simpson {p3.gap:.4e}<={p3.bound:.4e}")

# A random check of the ordering H <= G <= L <= I <= A.
rng = np.random.default_rng(0)
pairs = rng.uniform(0.1, 10, (1000, 2))
ok = all(
    means.harmonic(x, y) <= means.geometric(x, y) <= means.logarithmic(x, y) * (1 + 1e-14)
    and means.logarithmic(x, y) <= means.identric(x, y) * (1 + 1e-14) <= means.arithmetic(x, y) * (1 + 2e-14)
    for x, y in pairs
)
print("ordering holds on 1000 random pairs:", ok)
