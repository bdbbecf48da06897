import math

import mpmath
import pytest

from almost_soliton import dual
from almost_soliton.dual import Dual2, HyperDual, derivative, real, second_derivative
from almost_soliton.errors import EvalDomainError


def jet(fn, t):
    out = fn(Dual2(t, 1.0, 0.0))
    return out.value, out.d1, out.d2


class TestDual2:
    def test_product_rule(self):
        v, d1, d2 = jet(lambda t: t * t * t, 2.0)
        assert (v, d1, d2) == (8.0, 12.0, 12.0)

    def test_quotient(self):
        v, d1, d2 = jet(lambda t: 1.0 / (1.0 + t * t), 0.0)
        assert (v, d1, d2) == (1.0, 0.0, -2.0)

    def test_exp_cosh(self):
        v, d1, d2 = jet(lambda t: dual.exp(-dual.cosh(t)), 0.0)
        e = math.exp(-1.0)
        assert v == pytest.approx(e) and d1 == 0.0 and d2 == pytest.approx(-e)

    @pytest.mark.parametrize("t", [-1.3, 0.2, 0.7, 2.5])
    def test_against_closed_forms(self, t):
        _, d1, d2 = jet(lambda s: dual.sin(s) * dual.exp(s), t)
        assert d1 == pytest.approx(math.exp(t) * (math.sin(t) + math.cos(t)), rel=1e-14)
        assert d2 == pytest.approx(2 * math.exp(t) * math.cos(t), rel=1e-13, abs=1e-14)

    def test_nested_gives_third_derivative(self):
        # differentiate the second-derivative function once more
        third = derivative(second_derivative(lambda s: s ** 4))
        assert third(1.5) == pytest.approx(24 * 1.5)

    def test_power_integer_and_real(self):
        _, d1, d2 = jet(lambda s: s ** 3, 2.0)
        assert (d1, d2) == (12.0, 12.0)
        _, d1, d2 = jet(lambda s: s ** 0.5, 4.0)
        assert d1 == pytest.approx(0.25) and d2 == pytest.approx(-1 / 32)

    def test_variable_exponent(self):
        _, d1, _ = jet(lambda s: 2.0 ** s, 1.0)
        assert d1 == pytest.approx(2 * math.log(2))

    def test_domain_errors(self):
        with pytest.raises(EvalDomainError):
            dual.log(Dual2(-1.0, 1.0, 0.0))
        with pytest.raises(EvalDomainError):
            dual.sqrt(-1.0)
        with pytest.raises(EvalDomainError):
            1.0 / Dual2(0.0, 1.0, 0.0)
        with pytest.raises(EvalDomainError):
            dual.exp(1e5)

    def test_mpf_passthrough(self):
        with mpmath.workdps(30):
            out = dual.exp(Dual2(mpmath.mpf(1), 1, 0))
            assert isinstance(out.value, mpmath.mpf)
            assert abs(out.d2 - mpmath.e) < mpmath.mpf(10) ** -28


class TestHyperDual:
    def test_mixed_partial(self):
        x = HyperDual(1.0, 1.0, 0.0, 0.0)
        y = HyperDual(2.0, 0.0, 1.0, 0.0)
        out = x * x * y + dual.sin(x * y)
        assert out.b == pytest.approx(2 * 1 * 2 + 2 * math.cos(2))
        assert out.c == pytest.approx(1 + math.cos(2))
        # d2/dxdy = 2x + cos(xy) - xy sin(xy)
        assert out.d == pytest.approx(2 + math.cos(2) - 2 * math.sin(2))

    def test_same_direction_gives_second_derivative(self):
        x = HyperDual(0.5, 1.0, 1.0, 0.0)
        out = dual.exp(x * x)
        assert out.d == pytest.approx((2 + 4 * 0.25) * math.exp(0.25))

    def test_real_strips_nesting(self):
        assert real(Dual2(HyperDual(3.0, 1.0, 1.0, 0.0), 1.0, 0.0)) == 3.0
