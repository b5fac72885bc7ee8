"""Brute-force numerical reference for the rule family.

Everything here is computed by adaptive quadrature, independently of the
closed forms in :mod:`quadcert.rule`, so the two can be checked against each
other: the integral identity behind the rule, the intermediate kernel bound,
and every moment coefficient.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .rule import (
    Interval,
    LambdaRule,
    _as_rule,
    abs_kernel_mass,
    bound_first_order,
    bound_power_mean,
    moment_coefficients,
    rule_value,
)

DEFAULT_TOL = 1e-12
DEFAULT_BUDGET = 10**6

_GL_ORDER = 8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
# error of the composite rule drops by 2**(2n) per halving
_RICHARDSON = 2.0 ** (2 * _GL_ORDER) - 1.0


def eval_budget() -> int:
    """Evaluation budget, overridable through ``QUADCERT_EVAL_BUDGET``."""
    raw = os.environ.get("QUADCERT_EVAL_BUDGET")
    if raw:
        try:
            value = int(float(raw))
        except ValueError:
            raise ValueError(f"QUADCERT_EVAL_BUDGET must be an integer, got {raw!r}") from None
        if value > 0:
            return value
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class IntegrandSpec:
    """An integrand ``f`` together with its second derivative.

    ``f`` and ``d2`` should accept numpy arrays; scalar-only callables still
    work, just slower.  ``exact_integral(a, b)`` returns the integral over
    ``[a, b]`` and is trusted over any numerical value when present.
    """

    f: Callable
    d2: Optional[Callable] = None
    exact_integral: Optional[Callable[[float, float], float]] = None
    label: str = ""


@dataclass(frozen=True)
class RefResult:
    value: float
    est_error: float
    evaluations: int


class BudgetExhausted(RuntimeError):
    """Reference integration ran out of evaluations before reaching ``tol``."""

    def __init__(self, value: float, est_error: float, evaluations: int):
        super().__init__(
            f"evaluation budget exhausted after {evaluations} evaluations; "
            f"best estimate {value!r} with estimated error {est_error:.3g}"
        )
        self.result = RefResult(value, est_error, evaluations)


def _call(g: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(g(x), dtype=float)
    except (TypeError, ValueError):
        y = None
    if y is None or y.shape != x.shape:
        if y is not None and y.ndim == 0:
            return np.full(x.shape, float(y))
        y = np.array([float(g(float(xi))) for xi in x], dtype=float)
    return y


class _Adaptive:
    """Globally adaptive bisection with an 8-point Gauss-Legendre panel rule.

    Each panel compares the rule on the panel with the rule on its two
    halves; the difference is the error estimate and the half-sum, lifted by
    one Richardson step, is the panel value.
    """

    def __init__(self, g: Callable, budget: int):
        self.g = g
        self.budget = budget
        self.evaluations = 0

    def _gl(self, lo: float, hi: float) -> float:
        half = 0.5 * (hi - lo)
        x = lo + half * (_GL_X + 1.0)
        self.evaluations += _GL_ORDER
        return half * float(np.dot(_GL_W, _call(self.g, x)))

    def _panel(self, lo, hi, coarse):
        mid = 0.5 * (lo + hi)
        left = self._gl(lo, mid)
        right = self._gl(mid, hi)
        fine = left + right
        value = fine + (fine - coarse) / _RICHARDSON
        return value, abs(fine - coarse), left, right

    def run(self, lo: float, hi: float, tol: float) -> RefResult:
        heap = []
        counter = 0
        coarse = self._gl(lo, hi)
        value, err, left, right = self._panel(lo, hi, coarse)
        heap.append((-err, counter, lo, hi, value, err, left, right))
        total_err = err
        while total_err > tol:
            neg, _, plo, phi, pval, perr, left, right = heap[0]
            pmid = 0.5 * (plo + phi)
            if not (plo < pmid < phi) or pmid - plo <= 4 * np.finfo(float).eps * max(abs(pmid), 1.0):
                break  # cannot resolve further in double precision
            if self.evaluations + 4 * _GL_ORDER > self.budget:
                total = math.fsum(item[4] for item in heap)
                raise BudgetExhausted(total, total_err, self.evaluations)
            heapq.heappop(heap)
            for clo, chi, ccoarse in ((plo, pmid, left), (pmid, phi, right)):
                counter += 1
                cval, cerr, cl, cr = self._panel(clo, chi, ccoarse)
                heapq.heappush(heap, (-cerr, counter, clo, chi, cval, cerr, cl, cr))
            # recompute instead of updating to avoid drift in the stopping test
            total_err = math.fsum(item[5] for item in heap)
        panels = sorted(heap, key=lambda item: item[2])
        return RefResult(math.fsum(p[4] for p in panels), total_err, self.evaluations)


def _integrate(g: Callable, breakpoints, tol: float, budget: Optional[int] = None) -> RefResult:
    """Integrate ``g`` over consecutive panels given by sorted ``breakpoints``."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    budget = eval_budget() if budget is None else budget
    pts = sorted(set(float(p) for p in breakpoints))
    panels = [(lo, hi) for lo, hi in zip(pts[:-1], pts[1:]) if hi > lo]
    values, errs, used = [], [], 0
    for lo, hi in panels:
        ad = _Adaptive(g, budget - used)
        try:
            res = ad.run(lo, hi, tol / len(panels))
        except BudgetExhausted as exc:
            r = exc.result
            raise BudgetExhausted(
                math.fsum(values) + r.value, math.fsum(errs) + r.est_error, used + r.evaluations
            ) from None
        values.append(res.value)
        errs.append(res.est_error)
        used += res.evaluations
    return RefResult(math.fsum(values), math.fsum(errs), used)


def reference_integral(spec: IntegrandSpec, iv: Interval, tol: float = DEFAULT_TOL) -> RefResult:
    """High-accuracy value of the integral of ``spec.f`` over ``iv``.

    Deterministic; raises :class:`BudgetExhausted` (carrying the best estimate)
    when the evaluation budget runs out.
    """
    return _integrate(spec.f, (iv.a, iv.b), tol)


def _mean(spec: IntegrandSpec, iv: Interval, tol: float) -> float:
    if spec.exact_integral is not None:
        return float(spec.exact_integral(iv.a, iv.b)) / iv.width
    return reference_integral(spec, iv, tol * iv.width).value / iv.width


def rule_gap(spec: IntegrandSpec, iv: Interval, rule, tol: float = DEFAULT_TOL) -> float:
    """Interval mean of ``f`` minus the rule value."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rule = _as_rule(rule)
    fa, fm, fb = _call(spec.f, np.array([iv.a, iv.mid, iv.b]))
    return _mean(spec, iv, tol) - rule_value(float(fa), float(fm), float(fb), rule)


def kernel_values(t, rule) -> np.ndarray:
    lam = _as_rule(rule).lam
    t = np.asarray(t, dtype=float)
    return np.where(t <= 0.5, 0.5 * t * (t - lam), 0.5 * (1.0 - t) * (1.0 - lam - t))


def _kernel_breaks(lam: float):
    return [0.0, lam, 0.5, 1.0 - lam, 1.0]


def _need_d2(spec: IntegrandSpec):
    if spec.d2 is None:
        raise ValueError(f"integrand {spec.label!r} has no second derivative")


def identity_rhs(spec: IntegrandSpec, iv: Interval, rule, tol: float = DEFAULT_TOL) -> float:
    """``(b-a)**2 * int_0^1 k(t) f''(t a + (1-t) b) dt`` by brute force."""
    _need_d2(spec)
    rule = _as_rule(rule)
    a, b, w2 = iv.a, iv.b, iv.width**2

    def g(t):
        return kernel_values(t, rule) * _call(spec.d2, t * a + (1.0 - t) * b)

    return w2 * _integrate(g, _kernel_breaks(rule.lam), tol / w2).value


def identity_residual(spec: IntegrandSpec, iv: Interval, rule, tol: float = DEFAULT_TOL) -> float:
    return rule_gap(spec, iv, rule, tol) - identity_rhs(spec, iv, rule, tol)


def kernel_bound_oracle(spec: IntegrandSpec, iv: Interval, rule, tol: float = DEFAULT_TOL) -> float:
    """``(b-a)**2 * int_0^1 |k(t)| |f''(t a + (1-t) b)| dt``.

    Sits between the true gap and the closed-form bounds whenever ``|f''|``
    is convex.
    """
    _need_d2(spec)
    rule = _as_rule(rule)
    a, b, w2 = iv.a, iv.b, iv.width**2

    def g(t):
        return np.abs(kernel_values(t, rule)) * np.abs(_call(spec.d2, t * a + (1.0 - t) * b))

    return w2 * _integrate(g, _kernel_breaks(rule.lam), tol / w2).value


# -- moment coefficients -------------------------------------------------------

@dataclass(frozen=True)
class CoefficientCheck:
    name: str
    closed_form: float
    numeric: float

    @property
    def deviation(self) -> float:
        return abs(self.closed_form - self.numeric)


@dataclass(frozen=True)
class CoefficientReport:
    lam: float
    q: float
    tol: float
    checks: tuple[CoefficientCheck, ...]

    @property
    def max_deviation(self) -> float:
        return max(c.deviation for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.deviation < self.tol for c in self.checks)


def verify_coefficients(rule, q: float = 1.0, tol: float = DEFAULT_TOL) -> CoefficientReport:
    """Integrate every half-interval moment numerically and compare with the
    closed-form coefficients and kernel mass."""
    rule = _as_rule(rule)
    lam = rule.lam
    num_tol = tol * 1e-3

    def first(w):
        return lambda t: np.abs(t * (t - lam)) * w(t)

    def second(w):
        return lambda t: np.abs((1.0 - t) * (1.0 - lam - t)) * w(t)

    def one(t):
        return np.ones_like(t)

    def ident(t):
        return t

    def comp(t):
        return 1.0 - t

    lo_half = [0.0, min(lam, 0.5), 0.5]
    hi_half = [0.5, max(1.0 - lam, 0.5), 1.0]
    numeric = {
        "a1": _integrate(first(ident), lo_half, num_tol).value,
        "b1": _integrate(first(comp), lo_half, num_tol).value,
        "a2": _integrate(second(ident), hi_half, num_tol).value,
        "b2": _integrate(second(comp), hi_half, num_tol).value,
        "mass_first_half": _integrate(first(one), lo_half, num_tol).value,
        "mass_second_half": _integrate(second(one), hi_half, num_tol).value,
    }
    coeffs = moment_coefficients(rule)
    mass = abs_kernel_mass(rule)
    closed = {
        "a1": coeffs.a1,
        "b1": coeffs.b1,
        "a2": coeffs.a2,
        "b2": coeffs.b2,
        "mass_first_half": mass,
        "mass_second_half": mass,
    }
    checks = [CoefficientCheck(k, closed[k], numeric[k]) for k in closed]
    q = float(q)
    if q > 1.0:
        checks.append(
            CoefficientCheck(
                "mass_power", mass ** (1.0 - 1.0 / q), numeric["mass_first_half"] ** (1.0 - 1.0 / q)
            )
        )
    return CoefficientReport(lam, q, tol, tuple(checks))


# -- test corpus ---------------------------------------------------------------

def _power(n):
    def f(x):
        return np.asarray(x, dtype=float) ** n

    def d2(x):
        return n * (n - 1) * np.asarray(x, dtype=float) ** (n - 2)

    def exact(a, b):
        return (b ** (n + 1) - a ** (n + 1)) / (n + 1)

    return IntegrandSpec(f, d2, exact, f"x^{n}")


def corpus() -> list[tuple[IntegrandSpec, Interval]]:
    """Integrands with convex ``|f''|`` used for corpus-wide sweeps."""
    return [
        (_power(2), Interval(0.0, 1.0)),
        (_power(3), Interval(0.0, 1.0)),
        (_power(4), Interval(0.0, 1.0)),
        (_power(5), Interval(0.0, 1.0)),
        (
            IntegrandSpec(
                lambda x: 1.0 / np.asarray(x, dtype=float),
                lambda x: 2.0 / np.asarray(x, dtype=float) ** 3,
                lambda a, b: math.log(b) - math.log(a),
                "1/x",
            ),
            Interval(1.0, 2.0),
        ),
        (
            IntegrandSpec(np.exp, np.exp, lambda a, b: math.exp(b) - math.exp(a), "exp"),
            Interval(0.0, 1.0),
        ),
        (
            IntegrandSpec(
                lambda x: -np.log(x),
                lambda x: 1.0 / np.asarray(x, dtype=float) ** 2,
                lambda a, b: -((b * math.log(b) - b) - (a * math.log(a) - a)),
                "-ln(x)",
            ),
            Interval(1.0, 2.0),
        ),
    ]


LAMBDA_GRID = tuple(i / 10 for i in range(11))
Q_GRID = (1.0, 1.5, 2.0, 3.0, 5.0)


@dataclass
class SweepCase:
    label: str
    lam: float
    values: dict = field(default_factory=dict)
    ok: bool = True


def identity_sweep(tol: float = DEFAULT_TOL, limit: float = 1e-10) -> list[SweepCase]:
    cases = []
    for spec, iv in corpus():
        for lam in LAMBDA_GRID:
            gap = rule_gap(spec, iv, lam, tol)
            rhs = identity_rhs(spec, iv, lam, tol)
            res = gap - rhs
            cases.append(
                SweepCase(spec.label, lam, {"gap": gap, "rhs": rhs, "residual": res}, abs(res) < limit)
            )
    return cases


def bounds_sweep(tol: float = DEFAULT_TOL, qs=Q_GRID) -> list[SweepCase]:
    """Sandwich ``|gap| <= kernel bound <= closed-form bounds`` over the corpus.

    Comparisons allow the oracle tolerance as slack, since the kernel bound is
    itself only known to that accuracy.
    """
    cases = []
    for spec, iv in corpus():
        d2 = _call(spec.d2, np.array([iv.a, iv.b]))
        curv = (abs(float(d2[0])), abs(float(d2[1])))
        for lam in LAMBDA_GRID:
            gap = rule_gap(spec, iv, lam, tol)
            kb = kernel_bound_oracle(spec, iv, lam, tol)
            first = bound_first_order(iv.width, curv, lam).value
            slack = 10 * tol * max(1.0, kb)
            values = {"gap": gap, "kernel_bound": kb, "first_order": first}
            ok = abs(gap) <= kb + slack and kb <= first + slack
            for q in qs:
                pm = bound_power_mean(iv.width, curv, q, lam).value
                values[f"power_mean_q{q:g}"] = pm
                ok = ok and kb <= pm + slack
            cases.append(SweepCase(spec.label, lam, values, ok))
    return cases


def coefficient_sweep(tol: float = DEFAULT_TOL, qs=(1.0, 2.0)) -> list[CoefficientReport]:
    reports = []
    for lam in LAMBDA_GRID:
        for q in qs:
            reports.append(verify_coefficients(LambdaRule(lam), q, tol))
    return reports


__all__ = [
    "IntegrandSpec",
    "RefResult",
    "BudgetExhausted",
    "reference_integral",
    "rule_gap",
    "identity_rhs",
    "identity_residual",
    "kernel_bound_oracle",
    "kernel_values",
    "verify_coefficients",
    "CoefficientCheck",
    "CoefficientReport",
    "corpus",
    "identity_sweep",
    "bounds_sweep",
    "coefficient_sweep",
    "eval_budget",
    "LAMBDA_GRID",
    "Q_GRID",
]
