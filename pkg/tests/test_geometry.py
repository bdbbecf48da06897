import math

import numpy as np
import pytest

from almost_soliton import dual
from almost_soliton.curvature import (christoffel_at, flat_gradient_data, hessian_at, metric_at,
                                      ricci_at, soliton_residual_at)
from almost_soliton.errors import DegenerateMetric, DomainViolation
from almost_soliton.fields import (MetricField, ScalarField, Signature, conformal_metric,
                                   conformal_product_metric, coordinate_field, flat_metric,
                                   squared_norm, warped_metric)

RNG = np.random.default_rng(7)


def fd_grad_hess(fn, x, h=1e-4):
    """Central differences on a plain float function (oracle, no dual numbers)."""
    n = len(x)
    grad, hess = np.zeros(n), np.zeros((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        grad[i] = (fn(x + e) - fn(x - e)) / (2 * h)
        for j in range(n):
            d = np.zeros(n)
            d[j] = h
            hess[i, j] = (fn(x + e + d) - fn(x + e - d) - fn(x - e + d) + fn(x - e - d)) / (4 * h * h)
    return grad, hess


def conformal_ricci_oracle(sig, phi_float, x):
    """Ric of g/phi^2: [(n-2) phi Hess phi + (phi Lap phi - (n-1)|grad phi|^2) g] / phi^2."""
    n = sig.n
    eps = np.array(sig.epsilons, dtype=float)
    g = np.diag(eps)
    p = phi_float(x)
    grad, hess = fd_grad_hess(phi_float, x)
    lap = np.sum(eps * np.diag(hess))
    norm2 = np.sum(eps * grad * grad)
    return ((n - 2) * p * hess + (p * lap - (n - 1) * norm2) * g) / (p * p)


def conformal_christoffel_oracle(sig, phi_float, x):
    n = sig.n
    eps = np.array(sig.epsilons, dtype=float)
    grad, _ = fd_grad_hess(lambda y: -math.log(abs(phi_float(y))), x, h=1e-6)
    gam = np.zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                v = (k == i) * grad[j] + (k == j) * grad[i]
                if i == j:
                    v -= eps[i] * eps[k] * grad[k]
                gam[k, i, j] = v
    return gam


def upper_half(n):
    return ScalarField(n, lambda xs: xs[n - 1], "x_n")


class TestMetric:
    def test_flat_identity(self):
        assert np.array_equal(metric_at(flat_metric(Signature.euclidean(3)), [1, 2, 3]), np.eye(3))

    def test_conformal_value(self):
        m = conformal_metric(Signature.euclidean(3), upper_half(3))
        assert np.allclose(m([0, 0, 2]), np.eye(3) / 4, rtol=0, atol=1e-16)

    def test_degenerate_factor(self):
        m = conformal_metric(Signature.euclidean(3), upper_half(3))
        with pytest.raises(DomainViolation):
            m([0, 0, 0])

    def test_singular_matrix(self):
        m = MetricField(2, lambda xs: [[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(DegenerateMetric):
            metric_at(m, [0, 0])

    def test_signature_parse(self):
        s = Signature.parse("-++")
        assert s.epsilons == (-1, 1, 1) and str(s) == "-++" and not s.is_euclidean()
        with pytest.raises(ValueError):
            Signature.parse("+x+")

    def test_point_shape(self):
        with pytest.raises(ValueError):
            flat_metric(Signature.euclidean(3))([1, 2])
        with pytest.raises(ValueError):
            flat_metric(Signature.euclidean(3))([1, 2, float("nan")])


class TestChristoffel:
    def test_flat_vanishes(self):
        m = flat_metric(Signature.parse("-+++"))
        assert not christoffel_at(m, [0.3, -1, 2, 5]).any()

    def test_upper_half_space(self):
        gam = christoffel_at(conformal_metric(Signature.euclidean(3), upper_half(3)), [0, 0, 1])
        assert gam[0, 0, 2] == pytest.approx(-1.0) and gam[0, 2, 0] == pytest.approx(-1.0)
        assert gam[2, 0, 0] == pytest.approx(1.0) and gam[2, 2, 2] == pytest.approx(-1.0)

    def test_product_has_no_mixed_symbols(self):
        sig = Signature.euclidean(3)
        phi = ScalarField(3, lambda xs: 1.0 / (1.0 + xs[0] * xs[0]))
        m = warped_metric(sig, phi, ScalarField.constant(3, 1.0), 2)
        gam = christoffel_at(m, [0.4, -0.2, 0.1, 1.0, 2.0])
        base, fib = range(3), range(3, 5)
        for k in range(5):
            for i in base:
                for j in fib:
                    assert gam[k, i, j] == 0.0

    @pytest.mark.parametrize("sig", ["+++", "-++", "+-++"])
    def test_matches_conformal_formula(self, sig):
        sig = Signature.parse(sig)
        n = sig.n
        a = RNG.normal(size=n)

        def phi_generic(xs):
            return dual.exp(sum(a[i] * xs[i] for i in range(n)) * 0.3) + 0.5

        def phi_float(x):
            return math.exp(0.3 * float(np.dot(a, x))) + 0.5

        m = conformal_metric(sig, ScalarField(n, phi_generic))
        for _ in range(3):
            x = RNG.uniform(-1, 1, n)
            assert np.allclose(christoffel_at(m, x), conformal_christoffel_oracle(sig, phi_float, x),
                               atol=1e-7)

    def test_symmetric(self):
        m = conformal_metric(Signature.euclidean(4), ScalarField(4, lambda xs: 1 + squared_norm(xs)))
        gam = christoffel_at(m, [0.1, 0.2, -0.3, 0.7])
        assert np.array_equal(gam, np.transpose(gam, (0, 2, 1)))


class TestRicci:
    def test_flat(self):
        assert not ricci_at(flat_metric(Signature.parse("-++")), [1, 2, 3]).any()

    @pytest.mark.parametrize("n", [3, 4])
    def test_hyperbolic(self, n):
        m = conformal_metric(Signature.euclidean(n), upper_half(n))
        x = [0.2] * (n - 1) + [1.0]
        assert np.allclose(ricci_at(m, x), -(n - 1) * np.eye(n), atol=1e-12)

    def test_sphere(self):
        m = conformal_metric(Signature.euclidean(3),
                             ScalarField(3, lambda xs: 0.5 * (1 + squared_norm(xs))))
        for _ in range(5):
            x = RNG.uniform(-2, 2, 3)
            assert np.allclose(ricci_at(m, x), 2 * m(x), atol=1e-12)

    @pytest.mark.parametrize("sig", ["+++", "-++", "++++", "-+++"])
    def test_matches_conformal_formula(self, sig):
        sig = Signature.parse(sig)
        n = sig.n
        b = RNG.normal(size=n)

        def phi_generic(xs):
            s = 0.0
            for i in range(n):
                s = s + b[i] * xs[i]
            return 2.0 + dual.sin(s) * 0.5 + 0.1 * squared_norm(xs)

        def phi_float(x):
            return 2.0 + 0.5 * math.sin(float(np.dot(b, x))) + 0.1 * float(np.dot(x, x))

        m = conformal_metric(sig, ScalarField(n, phi_generic))
        for _ in range(3):
            x = RNG.uniform(-1, 1, n)
            assert np.allclose(ricci_at(m, x), conformal_ricci_oracle(sig, phi_float, x),
                               atol=1e-6)

    def test_fd_metric_path_agrees(self):
        sig = Signature.euclidean(3)
        exact = conformal_metric(sig, ScalarField(3, lambda xs: 1 + 0.2 * squared_norm(xs)))
        approx = MetricField(3, exact.fn, exact=False)
        x = [0.3, -0.4, 0.5]
        assert np.allclose(ricci_at(exact, x), ricci_at(approx, x), atol=1e-5)


class TestHessian:
    def test_flat_quadratic(self):
        f = ScalarField(3, lambda xs: 0.5 * squared_norm(xs))
        assert np.allclose(hessian_at(flat_metric(Signature.euclidean(3)), f, [1, -2, 3]), np.eye(3))

    def test_flat_linear(self):
        f = ScalarField(3, lambda xs: 2 * xs[0] - xs[2] + 5)
        assert not hessian_at(flat_metric(Signature.euclidean(3)), f, [1, 2, 3]).any()

    def test_hyperbolic_log(self):
        m = conformal_metric(Signature.euclidean(3), upper_half(3))
        f = ScalarField(3, lambda xs: dual.log(xs[2]))
        assert np.allclose(hessian_at(m, f, [0, 0, 1]), np.diag([-1.0, -1.0, 0.0]), atol=1e-14)

    def test_matches_fd_oracle(self):
        sig = Signature.parse("-++")
        phi = lambda x: 1.5 + 0.3 * math.cos(x[0] + 2 * x[1])
        m = conformal_metric(sig, ScalarField(3, lambda xs: 1.5 + 0.3 * dual.cos(xs[0] + 2 * xs[1])))
        f = ScalarField(3, lambda xs: dual.exp(0.5 * xs[0]) * xs[2])
        x = np.array([0.2, -0.1, 0.6])
        grad, hess = fd_grad_hess(lambda y: math.exp(0.5 * y[0]) * y[2], x)
        gam = conformal_christoffel_oracle(sig, phi, x)
        oracle = hess - np.einsum("kij,k->ij", gam, grad)
        assert np.allclose(hessian_at(m, f, x), oracle, atol=1e-6)


class TestGradientData:
    def test_euclidean_square_norm(self):
        p = np.array([1.0, -2.0, 0.5])
        g2, lap = flat_gradient_data(Signature.euclidean(3), ScalarField(3, squared_norm), p)
        assert g2 == pytest.approx(4 * p @ p) and lap == 6.0

    def test_signed_laplacian(self):
        _, lap = flat_gradient_data(Signature.parse("-++"), ScalarField(3, lambda xs: xs[0] * xs[0]),
                                    [0.3, 1, 2])
        assert lap == -2.0

    def test_translation_invariant(self):
        sig = Signature.parse("-+++")
        a = [0.5, 1.0, 0.0, 2.0]
        eps = sum(e * v * v for e, v in zip(sig.epsilons, a))
        s = ScalarField(4, lambda xs: dual.sin(sum(a[i] * xs[i] for i in range(4))))
        x = np.array([0.1, 0.2, 0.3, -0.4])
        xi = float(np.dot(a, x))
        _, lap = flat_gradient_data(sig, s, x)
        assert lap == pytest.approx(-eps * math.sin(xi), abs=1e-14)


class TestSolitonResidual:
    @pytest.mark.parametrize("A", [-1.0, 0.5, 2.0])
    def test_gaussian(self, A):
        B = RNG.normal(size=3)
        m = flat_metric(Signature.euclidean(3))
        f = ScalarField(3, lambda xs: A * squared_norm(xs) / 2 + sum(B[i] * xs[i] for i in range(3)) + 1)
        res = soliton_residual_at(m, f, ScalarField.constant(3, A), RNG.uniform(-2, 2, 3))
        assert np.abs(res).max() <= 1e-12

    def test_hyperbolic_einstein(self):
        m = conformal_metric(Signature.euclidean(3), upper_half(3))
        res = soliton_residual_at(m, ScalarField.constant(3, 4.0), ScalarField.constant(3, -2.0),
                                  [0.5, 0.1, 1.7])
        assert np.abs(res).max() <= 1e-12

    def test_rho_shift(self):
        m = conformal_metric(Signature.euclidean(3), upper_half(3))
        f = ScalarField.constant(3, 0.0)
        x = [0.1, 0.2, 0.8]
        base = soliton_residual_at(m, f, ScalarField.constant(3, -2.0), x)
        shifted = soliton_residual_at(m, f, ScalarField.constant(3, -2.0 + 0.3), x)
        assert np.allclose(shifted - base, -0.3 * m(x), rtol=0, atol=1e-13)


class TestRemark:
    def test_warped_equals_conformal_product(self):
        sig = Signature.euclidean(3)
        phi = ScalarField(3, lambda xs: dual.exp(-dual.cosh(xs[0])))
        warp = ScalarField(3, lambda xs: 1.0 / phi.fn(xs))
        a, b = warped_metric(sig, phi, warp, 2), conformal_product_metric(sig, phi, 2)
        for _ in range(20):
            x = RNG.uniform(-2, 2, 5)
            assert np.abs(a(x) - b(x)).max() <= 1e-15 * max(1.0, np.abs(b(x)).max())

    def test_coordinate_field(self):
        v, g, h = coordinate_field(3, 1).jet([4, 5, 6])
        assert v == 5 and list(g) == [0, 1, 0] and not h.any()
