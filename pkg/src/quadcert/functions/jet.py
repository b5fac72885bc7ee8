"""Order-2 jets: value, first and second derivative carried together.

Components may be floats or numpy arrays of a common shape, so a whole grid
of abscissae can be pushed through an expression in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class JetDomainError(ArithmeticError):
    """Evaluation left the domain of an elementary function."""

    def __init__(self, message: str, x=None):
        super().__init__(message if x is None else f"{message} (at x={_fmt(x)})")
        self.x = x


def _fmt(x):
    arr = np.asarray(x)
    return repr(float(arr)) if arr.ndim == 0 else f"array of {arr.size} points"


def _bad_x(x, mask):
    if x is None:
        return None
    arr = np.asarray(x)
    if arr.ndim == 0:
        return float(arr)
    return float(arr[np.asarray(mask)].flat[0])


@dataclass(frozen=True)
class Jet2:
    v: float | np.ndarray
    d1: float | np.ndarray = 0.0
    d2: float | np.ndarray = 0.0

    @classmethod
    def variable(cls, x):
        return cls(x, np.ones_like(x, dtype=float) if isinstance(x, np.ndarray) else 1.0, 0.0 * x)

    @classmethod
    def constant(cls, c):
        return cls(c, 0.0, 0.0)

    # arithmetic ---------------------------------------------------------

    def __neg__(self):
        return Jet2(-self.v, -self.d1, -self.d2)

    def __add__(self, other):
        other = _lift(other)
        return Jet2(self.v + other.v, self.d1 + other.d1, self.d2 + other.d2)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        return Jet2(self.v - other.v, self.d1 - other.d1, self.d2 - other.d2)

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        return Jet2(
            self.v * other.v,
            self.d1 * other.v + self.v * other.d1,
            self.d2 * other.v + 2.0 * self.d1 * other.d1 + self.v * other.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _lift(other).reciprocal()

    def __rtruediv__(self, other):
        return _lift(other) * self.reciprocal()

    def reciprocal(self, x=None):
        zero = np.asarray(self.v) == 0
        if np.any(zero):
            raise JetDomainError("division by zero", _bad_x(x, zero))
        r = 1.0 / self.v
        return self._compose(r, -r * r, 2.0 * r * r * r)

    # elementary functions -------------------------------------------------

    def _compose(self, g0, g1, g2):
        # (g o u)'' = g''(u) u'^2 + g'(u) u''
        return Jet2(g0, g1 * self.d1, g2 * self.d1 * self.d1 + g1 * self.d2)

    def exp(self, x=None):
        e = np.exp(self.v)
        return self._compose(e, e, e)

    def ln(self, x=None):
        bad = np.asarray(self.v) <= 0
        if np.any(bad):
            raise JetDomainError("ln of nonpositive argument", _bad_x(x, bad))
        r = 1.0 / self.v
        return self._compose(np.log(self.v), r, -r * r)

    def sqrt(self, x=None):
        bad = np.asarray(self.v) <= 0
        if np.any(bad):
            raise JetDomainError("sqrt needs a positive argument to be differentiable", _bad_x(x, bad))
        s = np.sqrt(self.v)
        return self._compose(s, 0.5 / s, -0.25 / (s * self.v))

    def sin(self, x=None):
        s, c = np.sin(self.v), np.cos(self.v)
        return self._compose(s, c, -s)

    def cos(self, x=None):
        s, c = np.sin(self.v), np.cos(self.v)
        return self._compose(c, -s, -c)

    def abs(self, x=None):
        zero = np.asarray(self.v) == 0
        if np.any(zero):
            raise JetDomainError("abs is not differentiable at 0", _bad_x(x, zero))
        sgn = np.sign(self.v)
        return Jet2(np.abs(self.v), sgn * self.d1, sgn * self.d2)

    def pow(self, c: float, x=None):
        """``self ** c`` for a constant exponent."""
        c = float(c)
        v = np.asarray(self.v, dtype=float)
        integral = c == int(c)
        if c == 0.0:
            one = np.ones_like(v) if v.ndim else 1.0
            return Jet2(one, 0.0 * self.d1, 0.0 * self.d2)
        if not integral:
            bad = v < 0 if c >= 2.0 else v <= 0
            if np.any(bad):
                raise JetDomainError(f"non-integer power {c!r} of invalid base", _bad_x(x, bad))
        elif c < 0:
            bad = v == 0
            if np.any(bad):
                raise JetDomainError("division by zero", _bad_x(x, bad))
        g0 = self.v**c
        g1 = c * self.v ** (c - 1.0) if c != 1.0 else 1.0 + 0.0 * v
        if c in (1.0, 2.0):
            g2 = c * (c - 1.0) + 0.0 * v
        else:
            g2 = c * (c - 1.0) * self.v ** (c - 2.0)
        return self._compose(g0, g1, g2)

    def __pow__(self, c):
        return self.pow(c)


def _lift(obj) -> Jet2:
    return obj if isinstance(obj, Jet2) else Jet2.constant(obj)
