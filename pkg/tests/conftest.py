import numpy as np
import pytest

from almost_soliton.ansatz import TranslationDirection, parse_profile
from almost_soliton.construct import (RADIAL, TRANSLATION, WARPED, IntegrationConstants,
                                      SolitonData)
from almost_soliton.fields import Signature


def grid(dim, count, lo=-1.0, hi=1.0):
    axis = np.linspace(lo, hi, count)
    mesh = np.meshgrid(*[axis] * dim, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def assembled(family, phi, f, rho, sig="+++", alphas=None, m=0, lambda_F=0.0, warping=None):
    """SolitonData from expressions, bypassing the construction."""
    sig = Signature.parse(sig)
    var = "r" if family == RADIAL else "xi"
    direction = None
    if family != RADIAL:
        alphas = alphas or (1.0,) + (0.0,) * (sig.n - 1)
        direction = TranslationDirection(alphas, sig)
    return SolitonData(family, sig, parse_profile(phi, var), parse_profile(f, var),
                       parse_profile(rho, var), IntegrationConstants(), direction=direction, m=m,
                       lambda_F=lambda_F,
                       warping=None if warping is None else parse_profile(warping, var))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


__all__ = ["grid", "assembled", "TRANSLATION", "RADIAL", "WARPED"]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
