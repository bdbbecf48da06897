"""Cumulative antiderivatives on a fixed working interval.

The interval is cut into short cells whose integrals come from adaptive
Simpson with Richardson correction; the running sums form a table anchored at
``base``.  A value between nodes is the table entry at the nearest node plus a
10-point Gauss-Legendre integral over the remaining piece, so evaluation never
extrapolates and never re-runs the adaptive scheme.
"""

from __future__ import annotations

import bisect
import math
from typing import Callable, Optional

import numpy as np

from . import dual
from .dual import Dual2, HyperDual, real
from .errors import DomainViolation, QuadratureFailure

DEFAULT_TOL = 1e-10
NODE_BUDGET = 2 ** 18
CELL_WIDTH = 1.0 / 16.0
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)
_GL_X = tuple(float(v) for v in _GL_X)
_GL_W = tuple(float(v) for v in _GL_W)


def _gauss_legendre(fn: Callable[[float], float], a: float, b: float) -> float:
    if a == b:
        return 0.0
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    total = 0.0
    for x, w in zip(_GL_X, _GL_W):
        total += w * fn(mid + half * x)
    return half * total


class _Counter:
    def __init__(self, fn, budget):
        self.fn = fn
        self.budget = budget
        self.calls = 0

    def __call__(self, t: float) -> float:
        self.calls += 1
        if self.calls > self.budget:
            raise QuadratureFailure(f"node budget of {self.budget} evaluations exhausted")
        v = real(self.fn(t))
        if not math.isfinite(v):
            raise QuadratureFailure(f"integrand is not finite at {t!r}")
        return v


def adaptive_simpson(fn: Callable[[float], float], a: float, b: float, tol: float,
                     max_depth: int = 48, relative: bool = False) -> float:
    """Integrate ``fn`` over ``[a, b]`` to absolute tolerance ``tol``.

    With ``relative=True`` the tolerance is scaled by the largest of the three
    initial samples when that exceeds 1, for integrands of large magnitude.
    """
    if a == b:
        return 0.0
    fa, fm, fb = fn(a), fn(0.5 * (a + b)), fn(b)
    if relative:
        tol *= max(1.0, abs(fa), abs(fm), abs(fb))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a0, b0, fa0, fm0, fb0, s, eps, depth = stack.pop()
        m = 0.5 * (a0 + b0)
        lm, rm = 0.5 * (a0 + m), 0.5 * (m + b0)
        flm, frm = fn(lm), fn(rm)
        left = (m - a0) / 6.0 * (fa0 + 4.0 * flm + fm0)
        right = (b0 - m) / 6.0 * (fm0 + 4.0 * frm + fb0)
        delta = left + right - s
        if abs(delta) <= 15.0 * eps or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15.0 * eps:
                raise QuadratureFailure(f"no convergence on [{a0}, {b0}]")
            total += left + right + delta / 15.0
        else:
            stack.append((a0, m, fa0, flm, fm0, left, 0.5 * eps, depth + 1))
            stack.append((m, b0, fm0, frm, fb0, right, 0.5 * eps, depth + 1))
    return total


def _cell(fn, a: float, b: float, tol: float) -> float:
    return adaptive_simpson(fn, a, b, tol * (b - a), relative=True)


class Antiderivative:
    """``F(t) = integral of fn from base to t`` on a working interval.

    ``fn`` must be a generic one-variable function (see :mod:`.dual`); calling
    the antiderivative on a dual number yields ``F``, ``fn`` and ``fn'`` in the
    derivative slots.
    """

    def __init__(self, fn: Callable, base: float, tol: float = DEFAULT_TOL,
                 interval: Optional[tuple] = None, cell: float = CELL_WIDTH,
                 budget: int = NODE_BUDGET):
        if not tol > 0:
            raise ValueError("tolerance must be positive")
        base = float(base)
        lo, hi = (base - 10.0, base + 10.0) if interval is None else map(float, interval)
        if not lo <= base <= hi:
            raise DomainViolation(f"base {base!r} outside working interval [{lo}, {hi}]")
        self.fn = fn
        self.base = base
        self.tol = float(tol)
        self.interval = (lo, hi)
        self._dfn = dual.derivative(fn)

        nodes = [base]
        k = 1
        while base - k * cell > lo:
            nodes.append(base - k * cell)
            k += 1
        if lo < base:
            nodes.append(lo)
        k = 1
        while base + k * cell < hi:
            nodes.append(base + k * cell)
            k += 1
        if hi > base:
            nodes.append(hi)
        nodes.sort()

        counted = _Counter(fn, budget)
        i0 = nodes.index(base)
        cum = [0.0] * len(nodes)
        for i in range(i0 + 1, len(nodes)):
            a, b = nodes[i - 1], nodes[i]
            cum[i] = cum[i - 1] + _cell(counted, a, b, self.tol)
        for i in range(i0 - 1, -1, -1):
            a, b = nodes[i], nodes[i + 1]
            cum[i] = cum[i + 1] - _cell(counted, a, b, self.tol)
        self.nodes = tuple(nodes)
        self.values = tuple(cum)
        self.evaluations = counted.calls

    def _value(self, t: float) -> float:
        t = float(t)
        lo, hi = self.interval
        if not lo <= t <= hi:
            raise DomainViolation(f"antiderivative queried at {t!r} outside [{lo}, {hi}]")
        i = bisect.bisect_left(self.nodes, t)
        if i == len(self.nodes):
            i -= 1
        if i > 0 and abs(self.nodes[i - 1] - t) < abs(self.nodes[i] - t):
            i -= 1
        node = self.nodes[i]
        return self.values[i] + _gauss_legendre(lambda s: real(self.fn(s)), node, t)

    def __call__(self, t):
        if isinstance(t, (Dual2, HyperDual)):
            return dual.lift(t, self, self.fn, self._dfn)
        return self._value(t)

    def between(self, a: float, b: float) -> float:
        """Integral from ``a`` to ``b``."""
        return self._value(b) - self._value(a)


def antiderivative(fn: Callable, base: float, tol: float = DEFAULT_TOL,
                   interval: Optional[tuple] = None) -> Antiderivative:
    return Antiderivative(fn, base, tol, interval)
