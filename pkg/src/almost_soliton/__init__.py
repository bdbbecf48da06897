"""Construction and verification of gradient Ricci almost solitons.

Closed-form quadrature constructions for conformally flat (translation- and
rotation-invariant) and warped-product families, checked against an
independent pointwise curvature oracle for ``Ric + Hess f - rho g``.
"""

from .ansatz import (CATALOG, Profile, RadialCoordinate, TranslationDirection, catalog,
                     parse_profile, resolve_profile)
from .construct import (IntegrationConstants, SolitonData, construct_radial,
                        construct_translation, construct_warped)
from .curvature import christoffel_at, hessian_at, ricci_at, soliton_residual_at
from .errors import (DegenerateMetric, DomainViolation, EvalDomainError, ParseError,
                     QuadratureFailure, SolitonError)
from .fields import MetricField, ScalarField, Signature, conformal_metric, warped_metric
from .quadrature import Antiderivative, antiderivative
from .verify import (ResidualReport, WarpedSpec, completeness_probe, residual_full_tensor,
                     residual_pde_conformal, residual_pde_warped, residual_system_radial,
                     residual_system_translation, residual_system_warped)

__version__ = "0.1.0"

__all__ = [
    "CATALOG", "Profile", "RadialCoordinate", "TranslationDirection", "catalog", "parse_profile",
    "resolve_profile", "IntegrationConstants", "SolitonData", "construct_radial",
    "construct_translation", "construct_warped", "christoffel_at", "hessian_at", "ricci_at",
    "soliton_residual_at", "DegenerateMetric", "DomainViolation", "EvalDomainError", "ParseError",
    "QuadratureFailure", "SolitonError", "MetricField", "ScalarField", "Signature",
    "conformal_metric", "warped_metric", "Antiderivative", "antiderivative", "ResidualReport",
    "WarpedSpec", "completeness_probe", "residual_full_tensor", "residual_pde_conformal",
    "residual_pde_warped", "residual_system_radial", "residual_system_translation",
    "residual_system_warped",
]
