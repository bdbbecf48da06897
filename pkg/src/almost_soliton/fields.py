"""Scalar and metric fields on coordinate space with exact second-order jets.

A field wraps a function of a coordinate list that is generic over number
types.  Its jet (value, gradient, Hessian) comes from hyper-dual evaluation:
one evaluation per unordered coordinate pair.  Black-box fields that only
accept floats fall back to central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dual import HyperDual, real
from .errors import DomainViolation

CONFORMAL_FLOOR = 1e-9


@dataclass(frozen=True)
class Signature:
    """Diagonal signs of a flat pseudo-Euclidean metric."""

    epsilons: tuple

    def __post_init__(self):
        eps = tuple(int(e) for e in self.epsilons)
        if not eps:
            raise ValueError("signature must have at least one entry")
        if any(e not in (-1, 1) for e in eps):
            raise ValueError(f"signature entries must be -1 or +1, got {self.epsilons!r}")
        if any(e != float(o) for e, o in zip(eps, self.epsilons)):
            raise ValueError(f"signature entries must be -1 or +1, got {self.epsilons!r}")
        object.__setattr__(self, "epsilons", eps)

    @classmethod
    def euclidean(cls, n: int) -> "Signature":
        return cls((1,) * n)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse a string such as ``"-+++"``."""
        if not text or set(text) - {"+", "-"}:
            raise ValueError(f"signature spec must be a string of '+'/'-', got {text!r}")
        return cls(tuple(1 if ch == "+" else -1 for ch in text))

    @property
    def n(self) -> int:
        return len(self.epsilons)

    def __str__(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.epsilons)

    def is_euclidean(self) -> bool:
        return all(e == 1 for e in self.epsilons)


def as_point(p, dim: int) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.shape != (dim,):
        raise ValueError(f"point has shape {x.shape}, expected ({dim},)")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"point has non-finite coordinates: {x}")
    return x


def _seeded(x: np.ndarray, i: int, j: int) -> list:
    coords = [HyperDual(float(v)) for v in x]
    coords[i] = HyperDual(float(x[i]), 1.0, 0.0, 0.0)
    if i == j:
        coords[i] = HyperDual(float(x[i]), 1.0, 1.0, 0.0)
    else:
        coords[j] = HyperDual(float(x[j]), 0.0, 1.0, 0.0)
    return coords


def fd_steps(x: np.ndarray) -> np.ndarray:
    return np.maximum(1.0, np.abs(x)) * 1e-4


def fd_jet(fn: Callable[[np.ndarray], float], x: np.ndarray):
    """Central-difference value, gradient and Hessian of a float function."""
    n = len(x)
    h = fd_steps(x)
    f0 = float(fn(x))
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h[i]
        fp, fm = float(fn(x + e)), float(fn(x - e))
        grad[i] = (fp - fm) / (2 * h[i])
        hess[i, i] = (fp - 2 * f0 + fm) / h[i] ** 2
        for j in range(i + 1, n):
            d = np.zeros(n)
            d[j] = h[j]
            v = (float(fn(x + e + d)) - float(fn(x + e - d))
                 - float(fn(x - e + d)) + float(fn(x - e - d))) / (4 * h[i] * h[j])
            hess[i, j] = hess[j, i] = v
    return f0, grad, hess


@dataclass(frozen=True)
class ScalarField:
    """A real function on R^dim with second-order derivative access.

    ``fn`` receives a list of coordinates.  With ``exact=True`` (default) it
    must accept :class:`~.dual.HyperDual` coordinates; otherwise only floats
    are passed and derivatives come from central differences.
    """

    dim: int
    fn: Callable
    label: str = ""
    exact: bool = True

    def __call__(self, p) -> float:
        x = as_point(p, self.dim)
        return real(self.fn(list(map(float, x))))

    def jet(self, p):
        """Return ``(value, gradient, hessian)`` at ``p``."""
        x = as_point(p, self.dim)
        if not self.exact:
            return fd_jet(lambda y: self.fn(list(map(float, y))), x)
        n = self.dim
        value = 0.0
        grad = np.zeros(n)
        hess = np.zeros((n, n))
        for i in range(n):
            for j in range(i, n):
                out = self.fn(_seeded(x, i, j))
                if not isinstance(out, HyperDual):
                    value = float(out)
                    continue
                value = float(out.a)
                if i == j:
                    grad[i] = out.b
                hess[i, j] = hess[j, i] = out.d
        return value, grad, hess

    def fd_jet(self, p):
        """Finite-difference jet, for cross-checking the exact path."""
        x = as_point(p, self.dim)
        return fd_jet(lambda y: real(self.fn(list(map(float, y)))), x)

    def extend(self, extra: int) -> "ScalarField":
        """The same function viewed on R^(dim+extra), ignoring the new coordinates."""
        n = self.dim
        return ScalarField(n + extra, lambda xs: self.fn(list(xs[:n])), self.label, self.exact)

    def shifted(self, delta: float) -> "ScalarField":
        return ScalarField(self.dim, lambda xs: self.fn(xs) + delta, f"{self.label}+{delta!r}",
                           self.exact)

    @classmethod
    def constant(cls, dim: int, value: float) -> "ScalarField":
        return cls(dim, lambda xs: value, repr(value))

    @classmethod
    def from_black_box(cls, dim: int, fn: Callable[[np.ndarray], float], label: str = "") -> "ScalarField":
        return cls(dim, fn, label, exact=False)


@dataclass(frozen=True)
class MetricField:
    """A symmetric-matrix field on R^dim.

    ``fn`` maps a coordinate list to an ``dim x dim`` nested sequence.  Only the
    upper triangle is read; the lower triangle is filled from it, so the
    matrix is symmetric by construction.
    """

    dim: int
    fn: Callable
    label: str = ""
    exact: bool = True

    def _matrix(self, entries) -> np.ndarray:
        n = self.dim
        g = np.zeros((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = real(entries[i][j])
        return g

    def __call__(self, p) -> np.ndarray:
        x = as_point(p, self.dim)
        return self._matrix(self.fn(list(map(float, x))))

    def jet(self, p):
        """Return ``(g, dg, ddg)`` with ``dg[k,i,j] = d_k g_ij`` and
        ``ddg[k,l,i,j] = d_k d_l g_ij``."""
        x = as_point(p, self.dim)
        n = self.dim
        if not self.exact:
            return self._fd_jet(x)
        g = np.zeros((n, n))
        dg = np.zeros((n, n, n))
        ddg = np.zeros((n, n, n, n))
        for k in range(n):
            for l in range(k, n):
                ent = self.fn(_seeded(x, k, l))
                for i in range(n):
                    for j in range(i, n):
                        e = ent[i][j]
                        if isinstance(e, HyperDual):
                            a, b, d = e.a, e.b, e.d
                        else:
                            a, b, d = float(e), 0.0, 0.0
                        g[i, j] = g[j, i] = a
                        if k == l:
                            dg[k, i, j] = dg[k, j, i] = b
                        ddg[k, l, i, j] = ddg[k, l, j, i] = d
                        ddg[l, k, i, j] = ddg[l, k, j, i] = d
        return g, dg, ddg

    def _fd_jet(self, x: np.ndarray):
        n = self.dim
        g = np.zeros((n, n))
        dg = np.zeros((n, n, n))
        ddg = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(i, n):
                v, grad, hess = fd_jet(
                    lambda y, i=i, j=j: real(self.fn(list(map(float, y)))[i][j]), x)
                g[i, j] = g[j, i] = v
                dg[:, i, j] = dg[:, j, i] = grad
                ddg[:, :, i, j] = ddg[:, :, j, i] = hess
        return g, dg, ddg


def flat_metric(sig: Signature) -> MetricField:
    n = sig.n
    rows = [[float(sig.epsilons[i]) if i == j else 0.0 for j in range(n)] for i in range(n)]
    return MetricField(n, lambda xs: rows, f"flat({sig})")


def _conformal_weight(phi: ScalarField, xs):
    """1/phi^2 at ``xs``, refusing points where the factor vanishes."""
    v = phi.fn(xs)
    if abs(real(v)) <= CONFORMAL_FLOOR:
        raise DomainViolation(
            f"conformal factor {real(v)!r} vanishes at {[real(c) for c in xs]}")
    inv = 1.0 / v
    return inv * inv


def conformal_metric(sig: Signature, phi: ScalarField) -> MetricField:
    """``g/phi^2`` for the flat metric ``g`` of signature ``sig``."""
    n = sig.n
    if phi.dim != n:
        raise ValueError("conformal factor dimension does not match signature")

    def fn(xs):
        w = _conformal_weight(phi, xs)
        return [[w * sig.epsilons[i] if i == j else 0.0 for j in range(n)] for i in range(n)]

    return MetricField(n, fn, f"conformal({sig}, {phi.label})", phi.exact)


def warped_metric(sig: Signature, phi: ScalarField, warp: ScalarField, m: int) -> MetricField:
    """Block metric ``diag(g/phi^2, warp^2 * I_m)`` on R^(n+m), flat fiber."""
    n = sig.n
    if m < 1:
        raise ValueError("fiber dimension must be at least 1")
    if phi.dim != n or warp.dim != n:
        raise ValueError("base fields must live on R^n")
    total = n + m

    def fn(xs):
        base = list(xs[:n])
        w = _conformal_weight(phi, base)
        f = warp.fn(base)
        if real(f) <= CONFORMAL_FLOOR:
            raise DomainViolation(f"warping function {real(f)!r} is not positive")
        ff = f * f
        rows = []
        for i in range(total):
            row = []
            for j in range(total):
                if i != j:
                    row.append(0.0)
                elif i < n:
                    row.append(w * sig.epsilons[i])
                else:
                    row.append(ff)
            rows.append(row)
        return rows

    return MetricField(total, fn, f"warped({sig}, m={m})", phi.exact and warp.exact)


def conformal_product_metric(sig: Signature, phi: ScalarField, m: int) -> MetricField:
    """``(g_E + g_F)/phi^2`` on R^(n+m) with flat Euclidean fiber."""
    n = sig.n
    total = n + m
    eps = list(sig.epsilons) + [1] * m

    def fn(xs):
        w = _conformal_weight(phi, list(xs[:n]))
        return [[w * eps[i] if i == j else 0.0 for j in range(total)] for i in range(total)]

    return MetricField(total, fn, f"conformal_product({sig}, m={m})", phi.exact)


def coordinate_field(dim: int, index: int) -> ScalarField:
    return ScalarField(dim, lambda xs: xs[index], f"x{index + 1}")


def squared_norm(xs) -> object:
    total = 0.0
    for c in xs:
        total = total + c * c
    return total
