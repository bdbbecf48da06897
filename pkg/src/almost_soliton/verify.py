"""Residual checks at three levels of reduction.

* ODE systems in the invariant variable (translation, radial, warped).
* The coordinate PDE systems for conformal and warped metrics.
* The full tensor equation ``Ric + Hess(f) - rho*g`` via :mod:`.curvature`.

The ODE checks evaluate the constructed one-variable functions in 30-digit
``mpmath`` arithmetic.  For rapidly decaying profiles the individual terms of
the first equation reach ~1e8 while their sum is zero, and double precision
alone would leave a cancellation floor above the default tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .ansatz import Profile
from .construct import RADIAL, TRANSLATION, WARPED, SolitonData, profile_jet
from .curvature import flat_gradient_data, soliton_residual_at
from .dual import real
from .fields import ScalarField, Signature, as_point

ODE_TOL = 1e-8
TENSOR_TOL = 1e-5
SKIP_FLOOR = 1e-6
WORKING_DPS = 30


@dataclass(frozen=True)
class SampleRecord:
    at: object
    components: tuple
    norm: float


@dataclass(frozen=True)
class ResidualReport:
    name: str
    records: tuple
    sup: float
    rms: float
    tol: float
    passed: bool
    skipped: int = 0

    @classmethod
    def from_records(cls, name: str, records: Sequence[SampleRecord], tol: float,
                     skipped: int = 0) -> "ResidualReport":
        norms = [r.norm for r in records]
        if not norms:
            sup = rms = math.inf
        else:
            sup = max(norms)
            rms = math.sqrt(sum(v * v for v in norms) / len(norms)) if math.isfinite(sup) else math.inf
            rms = min(rms, sup)
        return cls(name, tuple(records), sup, rms, tol, sup <= tol, skipped)

    def summary(self) -> dict:
        return {"name": self.name, "sup": self.sup, "rms": self.rms, "tol": self.tol,
                "pass": self.passed, "samples": len(self.records), "skipped": self.skipped}


def _record(at, comps) -> SampleRecord:
    comps = tuple(float(c) for c in comps)
    if all(math.isfinite(c) for c in comps):
        norm = max((abs(c) for c in comps), default=0.0)
    else:
        norm = math.inf
    return SampleRecord(at, comps, norm)


@dataclass(frozen=True)
class WarpedSpec:
    n: int
    m: int
    lambda_F: float = 0.0
    flat_fiber: bool = True

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("base dimension must be at least 3")
        if self.m < 1:
            raise ValueError("fiber dimension must be at least 1")

    def require_full_tensor(self) -> None:
        if self.lambda_F != 0.0 or not self.flat_fiber:
            raise ValueError("full-tensor checks need a flat fiber with lambda_F = 0")


def _hp(p: Profile, t):
    return profile_jet(p, t)


def _sample_hp(samples):
    for t in samples:
        yield float(t), mpmath.mpf(float(t))


# --- ODE systems -----------------------------------------------------------


def translation_rows(n: int, eps: float, phi, f, rho):
    """Residuals of the reduced translation system from jets of phi and f."""
    p, dp, ddp = phi
    _, df, ddf = f
    r1 = (n - 2) * ddp + 2 * dp * df + p * ddf
    r2 = eps * (p * ddp - (n - 1) * dp * dp - p * dp * df) - rho
    return r1, r2


def radial_rows(n: int, r, phi, f, rho):
    p, dp, ddp = phi
    _, df, ddf = f
    r1 = (n - 2) * ddp + 2 * dp * df + p * ddf
    r2 = (4 * (n - 1) * p * dp + 4 * r * p * ddp - 4 * (n - 1) * r * dp * dp
          - 4 * r * p * dp * df + 2 * p * p * df) - rho
    return r1, r2


def warped_rows(n: int, m: int, eps: float, lambda_F: float, phi, f, h, rho):
    p, dp, ddp = phi
    w, dw, ddw = f
    _, dh, ddh = h
    r1 = w * ((n - 2) * ddp + 2 * dp * dh + p * ddh) - m * p * ddw - 2 * m * dp * dw
    r2 = eps * (w * p * ddp - (n - 1) * w * dp * dp + m * p * dp * dw - w * p * dp * dh) - rho * w
    r3 = (eps * (-w * p * p * ddw + (n - 2) * w * p * dw * dp - (m - 1) * p * p * dw * dw
                 + w * p * p * dw * dh) - rho * w * w + lambda_F)
    return r1, r2, r3


def residual_system_translation(sd: SolitonData, samples, tol: float = ODE_TOL) -> ResidualReport:
    if sd.family != TRANSLATION:
        raise ValueError(f"expected translation data, got {sd.family}")
    records = []
    with mpmath.workdps(WORKING_DPS):
        for t, tt in _sample_hp(samples):
            comps = translation_rows(sd.n, sd.eps_i0, _hp(sd.phi, tt), _hp(sd.potential, tt),
                                     sd.rho(tt))
            records.append(_record(t, comps))
    return ResidualReport.from_records("ode_translation", records, tol)


def residual_system_radial(sd: SolitonData, samples, tol: float = ODE_TOL) -> ResidualReport:
    if sd.family != RADIAL:
        raise ValueError(f"expected radial data, got {sd.family}")
    records = []
    with mpmath.workdps(WORKING_DPS):
        for t, tt in _sample_hp(samples):
            comps = radial_rows(sd.n, tt, _hp(sd.phi, tt), _hp(sd.potential, tt), sd.rho(tt))
            records.append(_record(t, comps))
    return ResidualReport.from_records("ode_radial", records, tol)


def residual_system_warped(sd: SolitonData, spec: WarpedSpec, samples,
                           tol: float = ODE_TOL) -> ResidualReport:
    if sd.warping is None:
        raise ValueError("warped residuals need a warping function")
    records = []
    with mpmath.workdps(WORKING_DPS):
        for t, tt in _sample_hp(samples):
            comps = warped_rows(spec.n, spec.m, sd.eps_i0, spec.lambda_F, _hp(sd.phi, tt),
                                _hp(sd.warping, tt), _hp(sd.potential, tt), sd.rho(tt))
            records.append(_record(t, comps))
    return ResidualReport.from_records("ode_warped", records, tol)


def warped_rho_pair(sd: SolitonData, spec: WarpedSpec, t):
    """``rho`` solved from the second and from the third warped equation."""
    n, m, eps = spec.n, spec.m, sd.eps_i0
    p, dp, ddp = _hp(sd.phi, t)
    w, dw, ddw = _hp(sd.warping, t)
    _, dh, _ = _hp(sd.potential, t)
    from_row2 = eps * (w * p * ddp - (n - 1) * w * dp * dp + m * p * dp * dw
                       - w * p * dp * dh) / w
    from_row3 = (eps * (-w * p * p * ddw + (n - 2) * w * p * dw * dp - (m - 1) * p * p * dw * dw
                        + w * p * p * dw * dh) + spec.lambda_F) / (w * w)
    return from_row2, from_row3


def warped_rho_consistency(sd: SolitonData, spec: WarpedSpec, samples,
                           tol: float = ODE_TOL) -> ResidualReport:
    records = []
    with mpmath.workdps(WORKING_DPS):
        for t, tt in _sample_hp(samples):
            a, b = warped_rho_pair(sd, spec, tt)
            records.append(_record(t, (a - b,)))
    return ResidualReport.from_records("rho_consistency", records, tol)


# --- coordinate PDE systems ------------------------------------------------


def _skip_phi(value: float) -> bool:
    return not abs(value) > SKIP_FLOOR


def conformal_pde_components(phi: ScalarField, f: ScalarField, rho: ScalarField,
                             sig: Signature, x) -> tuple:
    """Off-diagonal then diagonal residuals of the conformal system at ``x``."""
    n = sig.n
    eps = sig.epsilons
    p, dp, hp = phi.jet(x)
    _, df, hf = f.jet(x)
    grad2, lap = flat_gradient_data(sig, phi, x)
    cross = sum(eps[k] * df[k] * dp[k] for k in range(n))
    rv = rho(x)
    off = [(n - 2) * hp[i, j] + dp[i] * df[j] + dp[j] * df[i] + p * hf[i, j]
           for i in range(n) for j in range(i + 1, n)]
    diag = [(n - 2) * p * hp[i, i] + (p * lap - (n - 1) * grad2) * eps[i]
            + 2 * p * dp[i] * df[i] + p * p * hf[i, i] - p * eps[i] * cross - rv * eps[i]
            for i in range(n)]
    return tuple(off) + tuple(diag)


def residual_pde_conformal(phi: ScalarField, f: ScalarField, rho: ScalarField, sig: Signature,
                           points, tol: float = ODE_TOL) -> ResidualReport:
    n = sig.n
    if n < 3:
        raise ValueError("dimension must be at least 3")
    if not (phi.dim == f.dim == rho.dim == n):
        raise ValueError("fields must live on R^n")
    records, skipped = [], 0
    for p in points:
        x = as_point(p, n)
        if _skip_phi(phi(x)):
            skipped += 1
            continue
        records.append(_record(tuple(x), conformal_pde_components(phi, f, rho, sig, x)))
    return ResidualReport.from_records("pde_conformal", records, tol, skipped)


def warped_pde_components(phi: ScalarField, f: ScalarField, h: ScalarField, rho: ScalarField,
                          sig: Signature, spec: WarpedSpec, x) -> tuple:
    n, m = sig.n, spec.m
    eps = sig.epsilons
    p, dp, hp = phi.jet(x)
    w, dw, hw = f.jet(x)
    _, dh, hh = h.jet(x)
    rv = rho(x)
    off = [(n - 2) * w * hp[i, j] + w * p * hh[i, j] - m * p * hw[i, j] - m * dp[i] * dw[j]
           - m * dp[j] * dw[i] + w * dp[i] * dh[j] + w * dp[j] * dh[i]
           for i in range(n) for j in range(i + 1, n)]
    trace = sum(eps[k] * (w * p * hp[k, k] - (n - 1) * w * dp[k] ** 2 + m * p * dp[k] * dw[k]
                          - w * p * dp[k] * dh[k]) for k in range(n))
    diag = [p * ((n - 2) * w * hp[i, i] + w * p * hh[i, i] - m * p * hw[i, i]
                 - 2 * m * dp[i] * dw[i] + 2 * w * dp[i] * dh[i])
            + eps[i] * trace - eps[i] * rv * w
            for i in range(n)]
    fiber = (sum(eps[k] * (-w * p * p * hw[k, k] + (n - 2) * w * p * dw[k] * dp[k]
                           - (m - 1) * p * p * dw[k] ** 2 + w * p * p * dw[k] * dh[k])
                 for k in range(n))
             - rv * w * w + spec.lambda_F)
    return tuple(off) + tuple(diag) + (fiber,)


def residual_pde_warped(phi: ScalarField, f: ScalarField, h: ScalarField, rho: ScalarField,
                        sig: Signature, spec: WarpedSpec, points,
                        tol: float = ODE_TOL) -> ResidualReport:
    n = sig.n
    if spec.n != n:
        raise ValueError("spec and signature disagree on the base dimension")
    if not (phi.dim == f.dim == h.dim == rho.dim == n):
        raise ValueError("fields must live on the base R^n")
    records, skipped = [], 0
    for p in points:
        x = as_point(p, n)
        if _skip_phi(phi(x)) or not f(x) > SKIP_FLOOR:
            skipped += 1
            continue
        records.append(_record(tuple(x), warped_pde_components(phi, f, h, rho, sig, spec, x)))
    return ResidualReport.from_records("pde_warped", records, tol, skipped)


# --- full tensor -----------------------------------------------------------


def residual_full_tensor(sd: SolitonData, points, spec: Optional[WarpedSpec] = None,
                         tol: float = TENSOR_TOL) -> ResidualReport:
    """Max-abs entry of ``Ric + Hess(potential) - rho * g`` over ``points``."""
    if sd.family == WARPED:
        spec = spec or WarpedSpec(sd.n, sd.m, sd.lambda_F)
        spec.require_full_tensor()
        if spec.m != sd.m or spec.n != sd.n:
            raise ValueError("warped spec does not match the soliton data")
    metric = sd.metric()
    potential = sd.potential_field()
    rho = sd.rho_field()
    records, skipped = [], 0
    for p in points:
        x = as_point(p, metric.dim)
        t = sd.invariant(x)
        if _skip_phi(real(sd.phi(t))):
            skipped += 1
            continue
        if sd.warping is not None and not real(sd.warping(t)) > SKIP_FLOOR:
            skipped += 1
            continue
        res = soliton_residual_at(metric, potential, rho, x)
        iu = np.triu_indices(metric.dim)
        records.append(_record(tuple(x), res[iu]))
    return ResidualReport.from_records("full_tensor", records, tol, skipped)


# --- completeness ----------------------------------------------------------


@dataclass(frozen=True)
class ProbeResult:
    bounded: bool
    bound: float
    positive: bool
    minimum: float = field(default=0.0)

    def __iter__(self):
        return iter((self.bounded, self.bound, self.positive))


def completeness_probe(p: Profile, window, samples: int) -> ProbeResult:
    """Sample ``|phi|`` on ``window``: is it bounded, by what, and nonvanishing?

    Evidence for the completeness criterion ``0 < |phi| <= c``, not a proof.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    signed = [real(p(float(t))) for t in np.linspace(window[0], window[1], samples)]
    values = [abs(v) for v in signed]
    finite = all(math.isfinite(v) for v in values)
    lo = min(values)
    # a sign change between samples means a zero in between
    one_sign = all(v > 0 for v in signed) or all(v < 0 for v in signed)
    return ProbeResult(finite, max(values), finite and lo > 0.0 and one_sign, lo)
