"""The lambda-family of three-point rules and their curvature error bounds.

For ``0 <= lam <= 1`` the rule

    Q_lam = lam * (f(a) + f(b)) / 2 + (1 - lam) * f((a + b) / 2)

approximates the interval mean of ``f``.  ``lam = 0`` is the midpoint rule,
``lam = 1`` the trapezoid rule and ``lam = 1/3`` Simpson's rule.  When
``|f''|`` is convex on ``[a, b]`` the gap ``mean - Q_lam`` is bounded by the
first-order bound (linear in ``|f''(a)|``, ``|f''(b)|``) and by the
power-mean bound of exponent ``q >= 1``.

All coefficients carry the common denominator ``192 = 3 * 2**6``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainError",
    "Regime",
    "Branch",
    "LambdaRule",
    "Interval",
    "EndpointCurvature",
    "ErrorBound",
    "MomentCoefficients",
    "kernel_k",
    "rule_value",
    "abs_kernel_mass",
    "moment_coefficients",
    "bound_first_order",
    "bound_power_mean",
    "best_lambda",
    "SIMPSON",
    "MIDPOINT",
    "TRAPEZOID",
]


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class Regime(enum.Enum):
    LOW = "low"  # lam <= 1/2
    HIGH = "high"  # lam >= 1/2


class Branch(enum.Enum):
    LOW_FIRST_ORDER = "LowFirstOrder"
    HIGH_FIRST_ORDER = "HighFirstOrder"
    LOW_POWER_MEAN = "LowPowerMean"
    HIGH_POWER_MEAN = "HighPowerMean"


@dataclass(frozen=True)
class LambdaRule:
    """One member of the rule family.

    ``regime`` defaults to the branch containing ``lam``; at exactly 1/2 either
    tag is accepted and LOW is chosen.
    """

    lam: float
    regime: Regime = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        lam = float(self.lam)
        if not (0.0 <= lam <= 1.0):
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam!r}")
        object.__setattr__(self, "lam", lam)
        if self.regime is None:
            object.__setattr__(self, "regime", Regime.LOW if lam <= 0.5 else Regime.HIGH)
        elif self.regime is Regime.LOW and lam > 0.5:
            raise DomainError(f"LOW regime requires lambda <= 1/2, got {lam}")
        elif self.regime is Regime.HIGH and lam < 0.5:
            raise DomainError(f"HIGH regime requires lambda >= 1/2, got {lam}")


MIDPOINT = LambdaRule(0.0)
TRAPEZOID = LambdaRule(1.0)
SIMPSON = LambdaRule(1.0 / 3.0)


def _as_rule(rule) -> LambdaRule:
    return rule if isinstance(rule, LambdaRule) else LambdaRule(rule)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise DomainError(f"interval requires a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)


@dataclass(frozen=True)
class EndpointCurvature:
    """``|f''(a)|`` and ``|f''(b)|``."""

    d2a: float
    d2b: float

    def __post_init__(self):
        for name in ("d2a", "d2b"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and nonnegative, got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class ErrorBound:
    value: float
    lam: float
    q: float
    width: float
    branch: Branch

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class MomentCoefficients:
    """Weights of ``|f''(a)|**q`` and ``|f''(b)|**q`` in the two half-interval
    moment integrals: ``(a1, b1)`` for ``t in [0, 1/2]``, ``(a2, b2)`` for
    ``t in [1/2, 1]``."""

    a1: float
    b1: float
    a2: float
    b2: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.b1, self.a2, self.b2)


def kernel_k(t: float, rule) -> float:
    """Peano kernel of the rule on the unit interval."""
    lam = _as_rule(rule).lam
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"kernel argument must lie in [0, 1], got {t}")
    if t <= 0.5:
        return 0.5 * t * (t - lam)
    return 0.5 * (1.0 - t) * (1.0 - lam - t)


def rule_value(fa: float, fm: float, fb: float, rule) -> float:
    lam = _as_rule(rule).lam
    return lam * (fa + fb) / 2.0 + (1.0 - lam) * fm


# Closed forms, vectorised over lam.  Callers pick the branch.

def _mass_low(lam):
    return lam**3 / 3.0 + (1.0 - 3.0 * lam) / 24.0


def _mass_high(lam):
    return (3.0 * lam - 1.0) / 24.0


def _coeffs_low(lam):
    a1 = lam**4 / 6.0 + (3.0 - 8.0 * lam) / 192.0
    b1 = (2.0 - lam) * lam**3 / 6.0 + (5.0 - 16.0 * lam) / 192.0
    a2 = (1.0 + lam) * (1.0 - lam) ** 3 / 6.0 + (48.0 * lam - 27.0) / 192.0
    return a1, b1, a2, a1


def _coeffs_high(lam):
    a1 = (8.0 * lam - 3.0) / 192.0
    b1 = (16.0 * lam - 5.0) / 192.0
    return a1, b1, b1, a1


def abs_kernel_mass(rule) -> float:
    """``int_0^{1/2} |t (t - lam)| dt``; the second half has the same mass."""
    rule = _as_rule(rule)
    if rule.regime is Regime.LOW:
        return _mass_low(rule.lam)
    return _mass_high(rule.lam)


def moment_coefficients(rule) -> MomentCoefficients:
    rule = _as_rule(rule)
    if rule.regime is Regime.LOW:
        return MomentCoefficients(*_coeffs_low(rule.lam))
    return MomentCoefficients(*_coeffs_high(rule.lam))


def _check_width(width: float) -> float:
    width = float(width)
    if not (width > 0.0 and math.isfinite(width)):
        raise DomainError(f"width must be positive and finite, got {width}")
    return width


def _first_order_factor(lam, d2a, d2b, low):
    """Bound per unit squared width."""
    if low:
        ca = lam**4 + (1.0 + lam) * (1.0 - lam) ** 3 + (5.0 * lam - 3.0) / 4.0
        cb = lam**4 + (2.0 - lam) * lam**3 + (1.0 - 3.0 * lam) / 4.0
        return (ca * d2a + cb * d2b) / 12.0
    return (3.0 * lam - 1.0) / 48.0 * (d2a + d2b)


def _power_mean_factor(lam, d2a, d2b, q, low):
    if low:
        mass = _mass_low(lam)
        a1, b1, a2, b2 = _coeffs_low(lam)
    else:
        mass = _mass_high(lam)
        a1, b1, a2, b2 = _coeffs_high(lam)
    pa, pb = d2a**q, d2b**q
    inv_q = 1.0 / q
    # max(., 0) guards tiny negative rounding in the coefficients near lam = 1/2
    left = np.maximum(a1 * pa + b1 * pb, 0.0) ** inv_q
    right = np.maximum(a2 * pa + b2 * pb, 0.0) ** inv_q
    return 0.5 * np.maximum(mass, 0.0) ** (1.0 - inv_q) * (left + right)


def _curv(curv) -> EndpointCurvature:
    if isinstance(curv, EndpointCurvature):
        return curv
    return EndpointCurvature(*curv)


def bound_first_order(width: float, curv, rule) -> ErrorBound:
    """Bound on ``|mean - Q_lam|`` valid when ``|f''|`` is convex on the interval.

    ``curv`` is an :class:`EndpointCurvature` or a ``(|f''(a)|, |f''(b)|)`` pair.
    """
    width = _check_width(width)
    curv = _curv(curv)
    rule = _as_rule(rule)
    low = rule.regime is Regime.LOW
    value = width**2 * _first_order_factor(rule.lam, curv.d2a, curv.d2b, low)
    branch = Branch.LOW_FIRST_ORDER if low else Branch.HIGH_FIRST_ORDER
    return ErrorBound(max(float(value), 0.0), rule.lam, 1.0, width, branch)


def bound_power_mean(width: float, curv, q: float, rule) -> ErrorBound:
    """Power-mean bound of exponent ``q >= 1``; valid when ``|f''|**q`` is convex.

    Equals :func:`bound_first_order` at ``q = 1``.
    """
    width = _check_width(width)
    q = float(q)
    if not (q >= 1.0 and math.isfinite(q)):
        raise DomainError(f"q must be a finite real >= 1, got {q}")
    curv = _curv(curv)
    rule = _as_rule(rule)
    low = rule.regime is Regime.LOW
    value = width**2 * float(_power_mean_factor(rule.lam, curv.d2a, curv.d2b, q, low))
    branch = Branch.LOW_POWER_MEAN if low else Branch.HIGH_POWER_MEAN
    return ErrorBound(value, rule.lam, q, width, branch)


GRID_STEP = 1.0 / 1024
LAMBDA_TOL = 1e-9

_GRID = np.arange(1025) * GRID_STEP
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_GRID_LOW = _GRID <= 0.5


def _grid_tables():
    """Lambda-only factors on the scan grid, computed once."""
    g_low, g_high = _GRID[_GRID_LOW], _GRID[~_GRID_LOW]
    first = np.empty((2, _GRID.size))
    first[0, _GRID_LOW] = _first_order_factor(g_low, 1.0, 0.0, True)
    first[1, _GRID_LOW] = _first_order_factor(g_low, 0.0, 1.0, True)
    first[0, ~_GRID_LOW] = _first_order_factor(g_high, 1.0, 0.0, False)
    first[1, ~_GRID_LOW] = _first_order_factor(g_high, 0.0, 1.0, False)
    coeffs = np.empty((5, _GRID.size))
    coeffs[:4, _GRID_LOW] = _coeffs_low(g_low)
    coeffs[:4, ~_GRID_LOW] = _coeffs_high(g_high)
    coeffs[4, _GRID_LOW] = _mass_low(g_low)
    coeffs[4, ~_GRID_LOW] = _mass_high(g_high)
    return first, coeffs


_FIRST_TABLE, _COEFF_TABLE = _grid_tables()


def _bound_factor_grid(d2a: float, d2b: float, q: float | None) -> np.ndarray:
    if q is None:
        return _FIRST_TABLE[0] * d2a + _FIRST_TABLE[1] * d2b
    a1, b1, a2, b2, mass = _COEFF_TABLE
    pa, pb = d2a**q, d2b**q
    inv_q = 1.0 / q
    left = np.maximum(a1 * pa + b1 * pb, 0.0) ** inv_q
    right = np.maximum(a2 * pa + b2 * pb, 0.0) ** inv_q
    return 0.5 * np.maximum(mass, 0.0) ** (1.0 - inv_q) * (left + right)


def best_lambda(width: float, curv, q: float | None = None) -> LambdaRule:
    """Rule minimising the selected bound (first-order when ``q`` is None).

    Dense scan with step 1/1024, then golden-section search on the cells
    around the winning node.  Ties go to the smaller lambda.
    """
    _check_width(width)
    curv = _curv(curv)
    if q is not None:
        q = float(q)
        if not q >= 1.0:
            raise DomainError(f"q must be >= 1, got {q}")

    def cost(lam: float) -> float:
        # scalar path for the refinement loop; the grid uses the array form
        low = lam <= 0.5
        if q is None:
            return _first_order_factor(lam, curv.d2a, curv.d2b, low)
        return float(_power_mean_factor(lam, curv.d2a, curv.d2b, q, low))

    grid = _GRID
    values = _bound_factor_grid(curv.d2a, curv.d2b, q)
    i = int(np.argmin(values))  # first minimum -> smallest lambda on ties
    best_val = values[i]
    if best_val == 0.0 or np.all(values == best_val):
        return LambdaRule(grid[i])

    # golden-section search on the two grid cells around the winner
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, 1024)])
    m1, m2 = hi - _INV_PHI * (hi - lo), lo + _INV_PHI * (hi - lo)
    c1, c2 = cost(m1), cost(m2)
    while hi - lo > LAMBDA_TOL:
        if c1 <= c2:
            hi, m2, c2 = m2, m1, c1
            m1 = hi - _INV_PHI * (hi - lo)
            c1 = cost(m1)
        else:
            lo, m1, c1 = m1, m2, c2
            m2 = lo + _INV_PHI * (hi - lo)
            c2 = cost(m2)
    lam = 0.5 * (lo + hi)
    # never return something worse than the grid winner
    if cost(lam) > best_val:
        lam = grid[i]
    return LambdaRule(float(lam))
