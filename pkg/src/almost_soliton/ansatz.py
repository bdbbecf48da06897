"""Profiles of one variable and their lifts to fields on R^n.

A :class:`Profile` is a generic one-variable function: it can be called on a
float, a :class:`~.dual.Dual2` or a :class:`~.dual.HyperDual`, so derivatives
of any order are exact.  Fields on R^n are obtained by composing a profile
with the translation invariant ``xi = sum(alpha_i x_i)`` or the radial
invariant ``r = sum(x_i^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import dual, expr
from .dual import Dual2, real
from .errors import DomainViolation, ParseError
from .fields import ScalarField, Signature

NONVANISHING_FLOOR = 1e-9
SCAN_POINTS = 1024


@dataclass(frozen=True)
class Profile:
    fn: Callable
    label: str
    domain: Optional[tuple] = None
    variable: Optional[str] = None

    def __call__(self, t):
        if self.domain is not None:
            v = real(t)
            lo, hi = self.domain
            if not lo <= v <= hi:
                raise DomainViolation(f"{self.label}: argument {v!r} outside domain [{lo}, {hi}]")
        return self.fn(t)

    def eval2(self, t: float) -> tuple[float, float, float]:
        """Return ``(phi(t), phi'(t), phi''(t))``."""
        out = self(Dual2(float(t), 1.0, 0.0))
        if isinstance(out, Dual2):
            return real(out.value), real(out.d1), real(out.d2)
        return real(out), 0.0, 0.0

    def with_domain(self, lo: float, hi: float) -> "Profile":
        return Profile(self.fn, self.label, (float(lo), float(hi)), self.variable)

    def derivative(self) -> "Profile":
        return Profile(dual.derivative(self), f"d({self.label})", self.domain, self.variable)

    def check_nonvanishing(self, lo: float, hi: float, points: int = SCAN_POINTS,
                           floor: float = NONVANISHING_FLOOR) -> None:
        """Reject the profile if ``|phi| <= floor`` anywhere on a uniform scan.

        A sign change between neighbouring scan points is also rejected: a
        continuous profile must vanish in between.
        """
        prev = None
        for t in np.linspace(lo, hi, points):
            v = real(self(float(t)))
            if not abs(v) > floor:
                raise DomainViolation(
                    f"profile {self.label} has |phi| = {abs(v):.3e} <= {floor:g} at {t!r}")
            if prev is not None and (v > 0) != (prev > 0):
                raise DomainViolation(f"profile {self.label} changes sign near {t!r}")
            prev = v


def _const(a: float) -> Profile:
    return Profile(lambda t: a, f"const({a!r})")


CATALOG = {
    "paperA": Profile(lambda t: 1.0 / (1.0 + t * t), "paperA", variable="xi"),
    "paperB": Profile(lambda t: dual.exp(-dual.cosh(t)), "paperB", variable="xi"),
    "paperC": Profile(lambda t: dual.exp(-(t * t)), "paperC", variable="r"),
    "linear": Profile(lambda t: t, "linear"),
}

_CONST = re.compile(r"^\s*const\(\s*([^)]*?)\s*\)\s*$")


def catalog(name: str) -> Profile:
    """Look up a named profile; ``const(a)`` builds a constant."""
    m = _CONST.match(name)
    if m:
        try:
            return _const(float(m.group(1)))
        except ValueError:
            raise ParseError(f"bad constant {m.group(1)!r}", name.index("(") + 1, {"number"}) from None
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog profile {name!r}") from None


def parse_profile(text: str, variable: Optional[str] = None) -> Profile:
    """Parse an expression in ``xi`` or ``r`` into a profile."""
    node = expr.parse(text, variable)
    used = expr.variables(node)
    var = variable or (next(iter(used)) if len(used) == 1 else None)
    if len(used) > 1:
        raise ParseError("expression mixes the variables xi and r", 0, {"xi", "r"})
    return Profile(lambda t: expr.evaluate(node, t), text.strip(), variable=var)


def resolve_profile(text: str, variable: Optional[str] = None) -> Profile:
    """Catalog name if ``text`` names one, otherwise a parsed expression."""
    if text in CATALOG or _CONST.match(text):
        p = catalog(text)
        if variable is not None and p.variable not in (None, variable):
            raise ParseError(f"profile {text!r} is a function of {p.variable}, not {variable}", 0,
                             {variable})
        return p
    return parse_profile(text, variable)


def eps_i0(sig: Signature, alphas) -> float:
    """``sum(eps_i * alpha_i^2)``; zero for a null direction."""
    if len(alphas) != sig.n:
        raise ValueError("alphas and signature lengths differ")
    total = 0.0
    for e, a in zip(sig.epsilons, alphas):
        total += e * a * a
    return total


@dataclass(frozen=True)
class TranslationDirection:
    alphas: tuple
    signature: Signature

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if len(alphas) != self.signature.n:
            raise ValueError("alphas and signature lengths differ")
        if not all(np.isfinite(alphas)):
            raise ValueError("alphas must be finite")
        if all(a == 0.0 for a in alphas):
            raise ValueError("direction must have a nonzero alpha")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "_eps_i0", eps_i0(self.signature, alphas))

    @property
    def eps_i0(self) -> float:
        return self._eps_i0

    @property
    def n(self) -> int:
        return len(self.alphas)

    def xi(self, xs):
        total = 0.0
        for a, x in zip(self.alphas, xs):
            if a != 0.0:
                total = total + a * x
        return total

    def xi_range(self, half_width: float) -> tuple[float, float]:
        """Range of ``xi`` over the box ``[-half_width, half_width]^n``."""
        s = half_width * sum(abs(a) for a in self.alphas)
        return -s, s


@dataclass(frozen=True)
class RadialCoordinate:
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @classmethod
    def for_signature(cls, sig: Signature) -> "RadialCoordinate":
        if not sig.is_euclidean():
            raise ValueError("the radial invariant requires a Euclidean signature")
        return cls(sig.n)

    def r(self, xs):
        total = 0.0
        for x in xs:
            total = total + x * x
        return total


def lift_translation(p: Profile, d: TranslationDirection) -> ScalarField:
    """The field ``x -> p(sum(alpha_i x_i))``."""
    return ScalarField(d.n, lambda xs: p(d.xi(xs)), f"{p.label}(xi)")


def lift_radial(p: Profile, rc: RadialCoordinate) -> ScalarField:
    """The field ``x -> p(sum(x_i^2))``."""
    return ScalarField(rc.dim, lambda xs: p(rc.r(xs)), f"{p.label}(r)")
