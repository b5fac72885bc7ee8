"""Special means of two positive numbers and the mean inequalities that
follow from the rule bounds applied to ``x**n`` and ``1/x``.

Each ``prop*`` function returns the signed gap together with its bound, so
the inequality ``|gap| <= bound`` can be checked directly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .rule import DomainError, MIDPOINT, SIMPSON, TRAPEZOID, bound_power_mean

__all__ = [
    "MeanKind",
    "mean_value",
    "arithmetic",
    "geometric",
    "harmonic",
    "logarithmic",
    "identric",
    "p_logarithmic",
    "PropGap",
    "Prop2Gaps",
    "prop1_gap",
    "prop1_bound_168",
    "prop2_gaps",
    "prop3_gap",
]

# Simpson's first-order constant: 1/162 follows from the general bound at
# lam = 1/3.  The smaller 1/168 is sometimes quoted for the same estimate; it
# is kept only so reports can show that it does not follow from the kernel.
SIMPSON_CONSTANT = 162.0
ALT_SIMPSON_CONSTANT = 168.0


class MeanKind(enum.Enum):
    ARITHMETIC = "A"
    GEOMETRIC = "G"
    HARMONIC = "H"
    LOGARITHMIC = "L"
    IDENTRIC = "I"
    P_LOGARITHMIC = "Lp"


def _positive(a, b):
    a, b = float(a), float(b)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"arguments must be positive and finite, got ({a}, {b})")
    return a, b


def _nonnegative(a, b):
    a, b = float(a), float(b)
    if not (a >= 0 and b >= 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"arguments must be nonnegative and finite, got ({a}, {b})")
    return a, b


def arithmetic(a, b) -> float:
    a, b = _nonnegative(a, b)
    return 0.5 * (a + b)


def geometric(a, b) -> float:
    a, b = _nonnegative(a, b)
    return math.sqrt(a * b)


def harmonic(a, b) -> float:
    a, b = _positive(a, b)
    return 2.0 * a * b / (a + b)


def _log_ratio(lo, hi):
    """``ln(hi/lo)`` without the cancellation of ``ln hi - ln lo``."""
    return math.log1p((hi - lo) / lo)


def logarithmic(a, b) -> float:
    a, b = _positive(a, b)
    if a == b:
        return a
    lo, hi = min(a, b), max(a, b)
    return (hi - lo) / _log_ratio(lo, hi)


def identric(a, b) -> float:
    a, b = _positive(a, b)
    if a == b:
        return a
    lo, hi = min(a, b), max(a, b)
    # ln I = (hi ln hi - lo ln lo)/(hi - lo) - 1 = ln lo + hi ln(hi/lo)/(hi - lo) - 1
    return lo * math.exp(hi * _log_ratio(lo, hi) / (hi - lo) - 1.0)


def p_logarithmic(a, b, p: float) -> float:
    """``[(b^(p+1) - a^(p+1)) / ((p+1)(b-a))]^(1/p)`` for ``p`` not in {-1, 0}."""
    a, b = _positive(a, b)
    p = float(p)
    if p in (-1.0, 0.0):
        raise DomainError("p-logarithmic mean is undefined at p = -1 and p = 0; use L or I")
    if a == b:
        return a
    lo, hi = min(a, b), max(a, b)
    s = p + 1.0
    # b^s - a^s = a^s * expm1(s ln(b/a)), stable for s near 0
    diff = lo**s * math.expm1(s * _log_ratio(lo, hi))
    return (diff / (s * (hi - lo))) ** (1.0 / p)


def mean_value(kind, a, b, p: Optional[float] = None) -> float:
    kind = MeanKind(kind) if not isinstance(kind, MeanKind) else kind
    if kind is MeanKind.P_LOGARITHMIC:
        if p is None:
            raise DomainError("p-logarithmic mean needs p")
        return p_logarithmic(a, b, p)
    return {
        MeanKind.ARITHMETIC: arithmetic,
        MeanKind.GEOMETRIC: geometric,
        MeanKind.HARMONIC: harmonic,
        MeanKind.LOGARITHMIC: logarithmic,
        MeanKind.IDENTRIC: identric,
    }[kind](a, b)


@dataclass(frozen=True)
class PropGap:
    gap: float
    bound: float

    @property
    def holds(self) -> bool:
        return abs(self.gap) <= self.bound


@dataclass(frozen=True)
class Prop2Gaps:
    mid_gap: float
    mid_bound: float
    trap_gap: float
    trap_bound: float

    @property
    def holds(self) -> bool:
        return abs(self.mid_gap) <= self.mid_bound and abs(self.trap_gap) <= self.trap_bound


def _ordered(a, b):
    a, b = _positive(a, b)
    if not a < b:
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    return a, b


def _q(q):
    q = float(q)
    if not q >= 1.0:
        raise DomainError(f"q must be >= 1, got {q}")
    return q


def _check_n(n):
    if int(n) != n or n <= 2:
        raise DomainError(f"n must be an integer greater than 2, got {n}")
    return int(n)


def prop1_gap(n: int, a: float, b: float) -> PropGap:
    """Simpson applied to ``x**n``:
    ``(1/3) A(a^n, b^n) + (2/3) A(a, b)^n - L_n(a, b)^n``."""
    n = _check_n(n)
    a, b = _ordered(a, b)
    gap = arithmetic(a**n, b**n) / 3.0 + 2.0 * arithmetic(a, b) ** n / 3.0 - p_logarithmic(a, b, n) ** n
    bound = n * (n - 1) * (b - a) ** 2 / SIMPSON_CONSTANT * (a ** (n - 2) + b ** (n - 2))
    return PropGap(gap, bound)


def prop1_bound_168(n: int, a: float, b: float) -> float:
    """The same bound with the constant 1/168 (smaller, not guaranteed)."""
    n = _check_n(n)
    a, b = _ordered(a, b)
    return n * (n - 1) * (b - a) ** 2 / ALT_SIMPSON_CONSTANT * (a ** (n - 2) + b ** (n - 2))


def _reciprocal_curvature(a, b):
    return (2.0 / a**3, 2.0 / b**3)


def prop2_gaps(a: float, b: float, q: float = 1.0) -> Prop2Gaps:
    """Midpoint and trapezoid rules applied to ``1/x``:
    ``1/L - 1/A`` and ``1/L - 1/H`` with their power-mean bounds."""
    a, b = _ordered(a, b)
    q = _q(q)
    inv_l = 1.0 / logarithmic(a, b)
    curv = _reciprocal_curvature(a, b)
    w = b - a
    return Prop2Gaps(
        inv_l - 1.0 / arithmetic(a, b),
        bound_power_mean(w, curv, q, MIDPOINT).value,
        inv_l - 1.0 / harmonic(a, b),
        bound_power_mean(w, curv, q, TRAPEZOID).value,
    )


def prop3_gap(a: float, b: float, q: float = 1.0) -> PropGap:
    """Simpson applied to ``1/x``: ``(1/3)/H + (2/3)/A - 1/L``.

    The bound's bracket is symmetric in the two endpoint curvatures, so the
    pairing of the 59/133 weights with ``a`` or ``b`` does not matter.
    """
    a, b = _ordered(a, b)
    q = _q(q)
    gap = 1.0 / (3.0 * harmonic(a, b)) + 2.0 / (3.0 * arithmetic(a, b)) - 1.0 / logarithmic(a, b)
    bound = bound_power_mean(b - a, _reciprocal_curvature(a, b), q, SIMPSON).value
    return PropGap(gap, bound)
