"""Closed-form quadrature constructions of gradient Ricci almost solitons.

Given a conformal factor ``phi`` of one invariant variable, each family
solves the linear first-order ODE for the potential's derivative,

    (phi^2 y)' = -(n-2) phi phi''     =>   y = [c - (n-2) I] / phi^2,

with ``I`` the antiderivative of ``phi phi''`` from ``base``, and integrates
once more for the potential.  ``rho`` then follows algebraically.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from .ansatz import (Profile, RadialCoordinate, TranslationDirection, lift_radial,
                     lift_translation)
from .dual import Dual2, real
from .errors import DomainViolation
from .fields import (MetricField, ScalarField, Signature, conformal_metric,
                     conformal_product_metric, warped_metric)
from .quadrature import DEFAULT_TOL, Antiderivative

TRANSLATION = "translation"
RADIAL = "radial"
WARPED = "warped"
PAD_FRACTION = 0.05


@dataclass(frozen=True)
class IntegrationConstants:
    """``c`` and ``k`` of the quadrature formulas, and the common lower limit.

    ``base=None`` picks the family default: 0, or 1 for a radial window that
    excludes the origin.
    """

    c: float = 1.0
    k: float = 0.0
    base: Optional[float] = None


@dataclass(frozen=True)
class SolitonData:
    family: str
    signature: Signature
    phi: Profile
    potential: Profile
    rho: Profile
    constants: IntegrationConstants
    direction: Optional[TranslationDirection] = None
    m: int = 0
    lambda_F: float = 0.0
    warping: Optional[Profile] = None
    interval: Optional[tuple] = None

    @property
    def n(self) -> int:
        return self.signature.n

    @property
    def eps_i0(self) -> float:
        return self.direction.eps_i0 if self.direction is not None else 1.0

    def lift(self, p: Profile) -> ScalarField:
        """Profile composed with this family's invariant, as a field on R^n."""
        if self.family == RADIAL:
            return lift_radial(p, RadialCoordinate.for_signature(self.signature))
        return lift_translation(p, self.direction)

    def invariant(self, x) -> float:
        xs = [float(v) for v in x[: self.n]]
        if self.family == RADIAL:
            return RadialCoordinate(self.n).r(xs)
        return self.direction.xi(xs)

    @property
    def total_dim(self) -> int:
        return self.n + self.m if self.family == WARPED else self.n

    def base_metric(self) -> MetricField:
        return conformal_metric(self.signature, self.lift(self.phi))

    def metric(self) -> MetricField:
        """The full metric: ``g/phi^2``, or the warped block metric on R^(n+m)."""
        if self.family == WARPED:
            return warped_metric(self.signature, self.lift(self.phi), self.lift(self.warping),
                                 self.m)
        return self.base_metric()

    def conformal_product(self) -> MetricField:
        return conformal_product_metric(self.signature, self.lift(self.phi), self.m)

    def potential_field(self) -> ScalarField:
        s = self.lift(self.potential)
        return s.extend(self.m) if self.family == WARPED else s

    def rho_field(self) -> ScalarField:
        s = self.lift(self.rho)
        return s.extend(self.m) if self.family == WARPED else s

    def shift_rho(self, delta: float) -> "SolitonData":
        """Same data with ``rho`` replaced by ``rho + delta``."""
        rho = self.rho
        shifted = Profile(lambda t: rho(t) + delta, f"{rho.label}+{delta!r}", rho.domain,
                          rho.variable)
        return dataclasses.replace(self, rho=shifted)


def profile_jet(p: Profile, t):
    """``(p, p', p'')`` at ``t``; components share the number type of ``t``."""
    out = p(Dual2(t, 1.0, 0.0))
    if isinstance(out, Dual2):
        return out.value, out.d1, out.d2
    return out, 0.0, 0.0


def working_interval(window, base: float, floor: Optional[float] = None) -> tuple:
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ValueError(f"empty window [{lo}, {hi}]")
    pad = PAD_FRACTION * (hi - lo)
    lo, hi = min(lo - pad, base), max(hi + pad, base)
    if floor is not None:
        lo = max(lo, floor)
    return lo, hi


def _bounded(fn, label: str, interval, variable) -> Profile:
    return Profile(fn, label, interval, variable)


def _inner_integral(phi: Profile, base: float, interval, tol: float) -> Antiderivative:
    def integrand(t):
        v, _, dd = profile_jet(phi, t)
        return v * dd

    return Antiderivative(integrand, base, tol, interval)


def _prepare(p: Profile, window, base, floor=None, positive=False):
    lo, hi = working_interval(window, base, floor)
    phi = p.with_domain(lo, hi)
    phi.check_nonvanishing(lo, hi)
    if positive and real(phi(0.5 * (lo + hi))) < 0:
        raise DomainViolation(f"profile {p.label} must be positive for a warping function")
    return phi, (lo, hi)


def _potential_slope(phi: Profile, inner: Antiderivative, c: float, weight: int):
    def slope(t):
        v = phi(t)
        return (c - weight * inner(t)) / (v * v)

    return slope


def construct_translation(p: Profile, n: int, d: TranslationDirection,
                          ic: IntegrationConstants = IntegrationConstants(),
                          window=(-3.0, 3.0), tol: float = DEFAULT_TOL) -> SolitonData:
    """Potential and rho for ``g/phi(xi)^2`` with ``xi = sum(alpha_i x_i)``."""
    if n < 3:
        raise ValueError("dimension must be at least 3")
    if d.n != n:
        raise ValueError("direction length does not match n")
    base = 0.0 if ic.base is None else float(ic.base)
    phi, interval = _prepare(p, window, base)
    inner = _inner_integral(phi, base, interval, tol)
    slope = _potential_slope(phi, inner, ic.c, n - 2)
    outer = Antiderivative(slope, base, tol, interval)
    k = ic.k
    eps = d.eps_i0

    potential = _bounded(lambda t: outer(t) + k, "f", interval, "xi")
    if eps == 0.0:
        rho = _bounded(lambda t: 0.0, "rho", interval, "xi")
    else:
        def rho_fn(t):
            v, dv, ddv = profile_jet(phi, t)
            return eps * (v * ddv - (n - 1) * (dv * dv) - v * dv * slope(t))

        rho = _bounded(rho_fn, "rho", interval, "xi")
    return SolitonData(TRANSLATION, d.signature, phi, potential, rho,
                       dataclasses.replace(ic, base=base), direction=d, interval=interval)


def construct_radial(p: Profile, n: int, ic: IntegrationConstants = IntegrationConstants(),
                     window=(0.1, 4.0), tol: float = DEFAULT_TOL) -> SolitonData:
    """Potential and rho for ``g/phi(r)^2`` with ``r = |x|^2`` (Euclidean)."""
    if n < 3:
        raise ValueError("dimension must be at least 3")
    if ic.base is None:
        base = 1.0 if window[0] > 0 else 0.0
    else:
        base = float(ic.base)
    floor = 0.0 if window[0] >= 0 else None
    phi, interval = _prepare(p, window, base, floor=floor)
    inner = _inner_integral(phi, base, interval, tol)
    c, k = ic.c, ic.k
    slope = _potential_slope(phi, inner, c, n - 2)
    outer = Antiderivative(slope, base, tol, interval)

    def rho_fn(r):
        v, dv, ddv = profile_jet(phi, r)
        q = dv / v
        return (4 * (n - 1) * v * dv + 4 * r * v * ddv - 4 * (n - 1) * r * (dv * dv)
                - 4 * c * r * q + 2 * c - 2 * (n - 2) * (1 - 2 * r * q) * inner(r))

    potential = _bounded(lambda r: outer(r) + k, "f", interval, "r")
    rho = _bounded(rho_fn, "rho", interval, "r")
    return SolitonData(RADIAL, Signature.euclidean(n), phi, potential, rho,
                       dataclasses.replace(ic, base=base), interval=interval)


def construct_warped(p: Profile, n: int, m: int, d: TranslationDirection,
                     ic: IntegrationConstants = IntegrationConstants(),
                     window=(-2.0, 2.0), tol: float = DEFAULT_TOL) -> SolitonData:
    """Warping ``1/phi``, potential ``h`` and rho on ``(R^n, g/phi^2) x_f R^m``.

    The fiber is Ricci flat.  ``h' = [k - (m+n-2) I] / phi^2``.
    """
    if n < 3:
        raise ValueError("base dimension must be at least 3")
    if m < 1:
        raise ValueError("fiber dimension must be at least 1")
    if d.n != n:
        raise ValueError("direction length does not match n")
    base = 0.0 if ic.base is None else float(ic.base)
    phi, interval = _prepare(p, window, base, positive=True)
    inner = _inner_integral(phi, base, interval, tol)
    c, k = ic.c, ic.k
    total = m + n - 2
    slope = _potential_slope(phi, inner, k, total)
    outer = Antiderivative(slope, base, tol, interval)
    eps = d.eps_i0

    warping = _bounded(lambda t: 1.0 / phi(t), "f", interval, "xi")
    potential = _bounded(lambda t: c + outer(t), "h", interval, "xi")
    if eps == 0.0:
        rho = _bounded(lambda t: 0.0, "rho", interval, "xi")
    else:
        def rho_fn(t):
            v, dv, ddv = profile_jet(phi, t)
            q = dv / v
            return eps * (v * ddv - (m + n - 1) * (dv * dv) - k * q + total * q * inner(t))

        rho = _bounded(rho_fn, "rho", interval, "xi")
    return SolitonData(WARPED, d.signature, phi, potential, rho,
                       dataclasses.replace(ic, base=base), direction=d, m=m, lambda_F=0.0,
                       warping=warping, interval=interval)
