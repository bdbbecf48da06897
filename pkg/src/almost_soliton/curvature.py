"""Pointwise Levi-Civita curvature of an arbitrary metric field.

Everything here works from the metric jet alone; nothing assumes a conformal
or warped structure.  Conventions::

    Gamma^k_ij = 1/2 g^km (d_i g_mj + d_j g_mi - d_m g_ij)
    Ric_ij     = d_k Gamma^k_ij - d_j Gamma^k_ik
                 + Gamma^k_kl Gamma^l_ij - Gamma^k_jl Gamma^l_ik

With this sign choice hyperbolic space has ``Ric = -(n-1) g``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DegenerateMetric
from .fields import MetricField, ScalarField, Signature, as_point

DET_FLOOR = 1e-12


class Geometry(NamedTuple):
    g: np.ndarray
    ginv: np.ndarray
    gamma: np.ndarray  # gamma[k, i, j] = Gamma^k_ij
    dgamma: np.ndarray  # dgamma[l, k, i, j] = d_l Gamma^k_ij


def _checked_inverse(g: np.ndarray) -> np.ndarray:
    det = np.linalg.det(g)
    if not abs(det) > DET_FLOOR:
        raise DegenerateMetric(f"|det g| = {abs(det):.3e} <= {DET_FLOOR:g}")
    return np.linalg.inv(g)


def metric_at(m: MetricField, p) -> np.ndarray:
    g = m(p)
    _checked_inverse(g)
    return g


def _first_kind(dg: np.ndarray) -> np.ndarray:
    # gamma1[m, i, j] = 1/2 (d_i g_mj + d_j g_mi - d_m g_ij); symmetric in (i, j)
    # term by term because dg[i, m, j] and dg[j, m, i] swap under i <-> j.
    return 0.5 * (np.einsum("imj->mij", dg) + np.einsum("jmi->mij", dg) - dg)


def geometry_at(m: MetricField, p) -> Geometry:
    g, dg, ddg = m.jet(p)
    ginv = _checked_inverse(g)
    gamma1 = _first_kind(dg)
    gamma = np.einsum("km,mij->kij", ginv, gamma1)
    # d_l gamma1[m, i, j]
    dgamma1 = 0.5 * (np.einsum("limj->lmij", ddg) + np.einsum("ljmi->lmij", ddg)
                     - ddg)
    dginv = -np.einsum("ka,lab,bm->lkm", ginv, dg, ginv)
    dgamma = (np.einsum("lkm,mij->lkij", dginv, gamma1)
              + np.einsum("km,lmij->lkij", ginv, dgamma1))
    return Geometry(g, ginv, _symmetrize_last(gamma), _symmetrize_last(dgamma))


def _symmetrize_last(a: np.ndarray) -> np.ndarray:
    # Matrix products may break (i, j) symmetry by one ulp; restore it exactly
    # by copying the upper triangle.
    n = a.shape[-1]
    iu = np.triu_indices(n, 1)
    out = a.copy()
    out[..., iu[1], iu[0]] = a[..., iu[0], iu[1]]
    return out


def christoffel_at(m: MetricField, p) -> np.ndarray:
    """Return ``gamma[k, i, j] = Gamma^k_ij`` at ``p``."""
    return geometry_at(m, p).gamma


def _ricci(geo: Geometry) -> np.ndarray:
    gamma, dgamma = geo.gamma, geo.dgamma
    ric = (np.einsum("kkij->ij", dgamma)
           - np.einsum("jkik->ij", dgamma)
           + np.einsum("kkl,lij->ij", gamma, gamma)
           - np.einsum("kjl,lik->ij", gamma, gamma))
    return _symmetric_part(ric)


def _symmetric_part(a: np.ndarray) -> np.ndarray:
    s = 0.5 * (a + a.T)
    iu = np.triu_indices(a.shape[0], 1)
    s[iu[1], iu[0]] = s[iu[0], iu[1]]
    return s


def ricci_at(m: MetricField, p) -> np.ndarray:
    return _ricci(geometry_at(m, p))


def _hessian(geo: Geometry, grad: np.ndarray, hess: np.ndarray) -> np.ndarray:
    return hess - np.einsum("kij,k->ij", geo.gamma, grad)


def hessian_at(m: MetricField, s: ScalarField, p) -> np.ndarray:
    """Covariant Hessian ``s_,ij - Gamma^k_ij s_,k``."""
    geo = geometry_at(m, p)
    _, grad, hess = s.jet(p)
    return _hessian(geo, grad, hess)


def flat_gradient_data(sig: Signature, s: ScalarField, p) -> tuple[float, float]:
    """``(|grad s|^2, Laplacian s)`` with respect to the flat metric of ``sig``."""
    x = as_point(p, sig.n)
    _, grad, hess = s.jet(x)
    eps = np.asarray(sig.epsilons, dtype=float)
    return float(np.sum(eps * grad * grad)), float(np.sum(eps * np.diag(hess)))


def soliton_residual_at(m: MetricField, f: ScalarField, rho: ScalarField, p) -> np.ndarray:
    """``Ric + Hess(f) - rho * g`` at ``p``."""
    if not (m.dim == f.dim == rho.dim):
        raise ValueError("metric, potential and rho must share a dimension")
    x = as_point(p, m.dim)
    geo = geometry_at(m, x)
    _, grad, hess = f.jet(x)
    return _ricci(geo) + _hessian(geo, grad, hess) - rho(x) * geo.g
