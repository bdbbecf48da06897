"""Forward-mode numbers carrying exact first and second derivatives.

Two number types live here:

* :class:`Dual2` is a second-order truncated Taylor number in one direction,
  ``value + d1*e + d2*e**2/2``.  Profiles of one variable are evaluated on it.
* :class:`HyperDual` is ``a + b*e1 + c*e2 + d*e1*e2`` with ``e1**2 = e2**2 = 0``.
  Seeding ``e1`` along ``x_i`` and ``e2`` along ``x_j`` yields the mixed
  partial ``d = d^2 F / dx_i dx_j``.

Both accept other numbers as components, so a ``Dual2`` whose value is itself a
``Dual2`` (or a ``HyperDual``) gives higher derivatives by nesting.  The outer
layer is always the newest perturbation: a ``Dual2`` treats any non-``Dual2``
operand as a scalar, while a ``HyperDual`` only accepts plain reals.
"""

from __future__ import annotations

import math
from typing import Callable, Union

import mpmath

from .errors import EvalDomainError

Real = Union[int, float]


class Dual2:
    __slots__ = ("value", "d1", "d2")

    def __init__(self, value, d1=0.0, d2=0.0):
        self.value = value
        self.d1 = d1
        self.d2 = d2

    def __repr__(self) -> str:
        return f"Dual2({self.value!r}, {self.d1!r}, {self.d2!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Dual2):
            return (self.value, self.d1, self.d2) == (other.value, other.d1, other.d2)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)
        return Dual2(self.value + other, self.d1, self.d2)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)
        return Dual2(self.value - other, self.d1, self.d2)

    def __rsub__(self, other):
        return Dual2(other - self.value, -self.d1, -self.d2)

    def __neg__(self):
        return Dual2(-self.value, -self.d1, -self.d2)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Dual2):
            return Dual2(
                self.value * other.value,
                self.d1 * other.value + self.value * other.d1,
                self.d2 * other.value + 2.0 * (self.d1 * other.d1) + self.value * other.d2,
            )
        return Dual2(self.value * other, self.d1 * other, self.d2 * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual2):
            return self * reciprocal(other)
        return Dual2(self.value / other, self.d1 / other, self.d2 / other)

    def __rtruediv__(self, other):
        return other * reciprocal(self)

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)


class HyperDual:
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b=0.0, c=0.0, d=0.0):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    def __repr__(self) -> str:
        return f"HyperDual({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, HyperDual):
            return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)
        if isinstance(other, (int, float)):
            return HyperDual(self.a + other, self.b, self.c, self.d)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)
        if isinstance(other, (int, float)):
            return HyperDual(self.a - other, self.b, self.c, self.d)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return HyperDual(other - self.a, -self.b, -self.c, -self.d)
        return NotImplemented

    def __neg__(self):
        return HyperDual(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(
                self.a * other.a,
                self.a * other.b + self.b * other.a,
                self.a * other.c + self.c * other.a,
                self.a * other.d + self.b * other.c + self.c * other.b + self.d * other.a,
            )
        if isinstance(other, (int, float)):
            return HyperDual(self.a * other, self.b * other, self.c * other, self.d * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HyperDual):
            return self * reciprocal(other)
        if isinstance(other, (int, float)):
            return HyperDual(self.a / other, self.b / other, self.c / other, self.d / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float)):
            return other * reciprocal(self)
        return NotImplemented

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)


def real(x) -> float:
    """Strip every perturbation layer and return the underlying float."""
    while True:
        if isinstance(x, Dual2):
            x = x.value
        elif isinstance(x, HyperDual):
            x = x.a
        else:
            return float(x)


def lift(x, f: Callable, df: Callable, ddf: Callable):
    """Apply a one-variable function with known first and second derivatives.

    ``f``, ``df`` and ``ddf`` must themselves accept any number type so that
    nested perturbations see the correct higher derivatives.
    """
    if isinstance(x, Dual2):
        v = x.value
        dv = df(v)
        return Dual2(f(v), dv * x.d1, dv * x.d2 + ddf(v) * (x.d1 * x.d1))
    if isinstance(x, HyperDual):
        a = x.a
        da = df(a)
        return HyperDual(f(a), da * x.b, da * x.c, da * x.d + ddf(a) * (x.b * x.c))
    return f(x)


def derivative(fn: Callable) -> Callable:
    """Return the exact derivative of a generic one-variable function."""

    def d(t):
        out = fn(Dual2(t, 1.0, 0.0))
        return out.d1 if isinstance(out, Dual2) else 0.0

    return d


def second_derivative(fn: Callable) -> Callable:
    def dd(t):
        out = fn(Dual2(t, 1.0, 0.0))
        return out.d2 if isinstance(out, Dual2) else 0.0

    return dd


def _is_dual(x) -> bool:
    return isinstance(x, (Dual2, HyperDual))


def _scalar_call(name: str, x):
    """Apply the elementary function ``name`` to a plain scalar.

    ``mpmath.mpf`` scalars stay in multiprecision; everything else is a float.
    """
    if isinstance(x, mpmath.mpf):
        return getattr(mpmath, name)(x)
    try:
        return getattr(math, name)(x)
    except OverflowError:
        raise EvalDomainError(f"{name} overflow at {x!r}") from None


def reciprocal(x):
    if not _is_dual(x):
        if x == 0:
            raise EvalDomainError("division by zero")
        return 1.0 / x
    if real(x) == 0.0:
        raise EvalDomainError("division by zero")
    return lift(x, reciprocal, lambda t: -reciprocal(t * t), lambda t: 2.0 * reciprocal(t * t * t))


def exp(x):
    if _is_dual(x):
        return lift(x, exp, exp, exp)
    return _scalar_call("exp", x)


def log(x):
    if _is_dual(x):
        return lift(x, log, reciprocal, lambda t: -reciprocal(t * t))
    if x <= 0:
        raise EvalDomainError(f"ln of non-positive value {x!r}")
    return _scalar_call("log", x)


def sin(x):
    if _is_dual(x):
        return lift(x, sin, cos, lambda t: -sin(t))
    return _scalar_call("sin", x)


def cos(x):
    if _is_dual(x):
        return lift(x, cos, lambda t: -sin(t), lambda t: -cos(t))
    return _scalar_call("cos", x)


def sinh(x):
    if _is_dual(x):
        return lift(x, sinh, cosh, sinh)
    return _scalar_call("sinh", x)


def cosh(x):
    if _is_dual(x):
        return lift(x, cosh, sinh, cosh)
    return _scalar_call("cosh", x)


def sqrt(x):
    if not _is_dual(x):
        if x < 0:
            raise EvalDomainError(f"sqrt of negative value {x!r}")
        return _scalar_call("sqrt", x)
    if real(x) <= 0.0:
        raise EvalDomainError("sqrt is not differentiable at or below 0")
    return lift(
        x,
        sqrt,
        lambda t: 0.5 * reciprocal(sqrt(t)),
        lambda t: -0.25 * reciprocal(t * sqrt(t)),
    )


def power(base, expo):
    """``base ** expo`` for any mix of reals and dual numbers."""
    if not _is_dual(expo):
        if not _is_dual(base):
            return _real_power(base, expo)
        if expo == 0:
            return 1.0
        if expo == 1:
            return base
        if float(expo).is_integer() and expo > 0:
            k = int(expo)
            out = base
            for _ in range(k - 1):
                out = out * base
            return out
        return lift(
            base,
            lambda t: power(t, expo),
            lambda t: expo * power(t, expo - 1),
            lambda t: expo * (expo - 1) * power(t, expo - 2),
        )
    # Variable exponent: only positive bases are meaningful.
    return exp(expo * log(base))


def _real_power(base, expo):
    if base == 0 and expo < 0:
        raise EvalDomainError("zero raised to a negative power")
    if base < 0 and not float(expo).is_integer():
        raise EvalDomainError(f"negative base {base!r} with non-integer exponent {expo!r}")
    if isinstance(base, mpmath.mpf) or isinstance(expo, mpmath.mpf):
        return mpmath.mpf(base) ** expo
    try:
        return float(base) ** expo
    except OverflowError:
        raise EvalDomainError(f"overflow in {base!r}**{expo!r}") from None
