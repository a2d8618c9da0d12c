"""Tests for the transport-profile algebra.

The exponential-sum representation claims exact integrals and exact
transport solves. These tests hold it to that: inner products are checked
against Gauss-Legendre quadrature and transport outputs are plugged back
into the equation they are supposed to satisfy.
"""

import cmath

import numpy as np
import pytest

from thermosemi.errors import ValidationError
from thermosemi.profiles import (
    ExponentialSum,
    GridSamples,
    moment_integral,
    profile_l2_norm2,
    transport_endpoint,
    transport_solve,
)


def gauss_integral(f, n=160):
    # integral of f over [0, 1] by Gauss-Legendre, spectrally accurate
    x, w = np.polynomial.legendre.leggauss(n)
    x = 0.5 * (x + 1.0)
    return 0.5 * np.sum(w * f(x))


class TestMomentIntegral:
    def test_zero_frequency(self):
        for m in range(6):
            assert moment_integral(m, 0.0) == pytest.approx(1.0 / (m + 1))

    @pytest.mark.parametrize("m", [0, 1, 2, 5, 9])
    @pytest.mark.parametrize("phi", [0.3, -0.7, 2.0, 12.5, -40.0])
    def test_against_quadrature(self, m, phi):
        want = gauss_integral(lambda r: r**m * np.exp(1j * phi * r))
        got = moment_integral(m, phi)
        assert abs(got - want) < 1e-13

    def test_branch_seam(self):
        # both branches stay accurate right at the switchover
        for m in [1, 3, 6]:
            for phi in [m + 0.4999, m + 0.5001]:
                want = gauss_integral(lambda r: r**m * np.exp(1j * phi * r))
                assert abs(moment_integral(m, phi) - want) < 1e-13

    def test_negative_order_rejected(self):
        with pytest.raises(ValidationError):
            moment_integral(-1, 1.0)


class TestExponentialSum:
    def test_merge_and_cancel(self):
        p = ExponentialSum.from_terms([(1.0, 0, 0.0), (2.0, 0, 0.0), (-3.0, 0, 0.0)])
        assert p.terms == ()
        assert p.l2_norm2() == 0.0

    def test_call_scalar_and_array(self):
        p = ExponentialSum.from_terms([(2.0, 1, 3.0)])
        v = p(0.5)
        assert isinstance(v, complex)
        assert v == pytest.approx(2.0 * 0.5 * cmath.exp(1.5j))
        arr = p(np.array([0.0, 1.0]))
        assert arr.shape == (2,)
        assert arr[0] == 0.0

    def test_exponential_form_matches_formula(self):
        c0, c1, omega = 1.5 - 0.5j, -0.25 + 2.0j, 4.0
        p = ExponentialSum.exponential_form(c0, c1, omega)
        rho = np.linspace(0.0, 1.0, 4096)
        want = c0 * np.exp(-1j * omega * rho) + rho * c1 * np.exp(1j * omega * (1.0 - rho))
        assert np.max(np.abs(p(rho) - want)) < 1e-13

    def test_endpoint_values(self):
        p = ExponentialSum.exponential_form(1.0 + 1j, 2.0, 3.0)
        assert p.value_at_0() == pytest.approx(1.0 + 1j)
        assert p.value_at_1() == pytest.approx(complex(p(1.0)))

    def test_derivative(self):
        p = ExponentialSum.from_terms([(1.0, 2, 5.0), (0.5j, 0, -2.0)])
        dp = p.derivative()
        rho = np.linspace(0.0, 1.0, 9)
        h = 1e-6
        fd = (p(rho + h) - p(rho - h)) / (2 * h)
        assert np.max(np.abs(dp(rho) - fd)) < 1e-7

    def test_algebra(self):
        p = ExponentialSum.exponential_form(1.0, -1.0, 2.0)
        q = ExponentialSum.from_terms([(0.5, 1, 0.0)])
        rho = np.linspace(0.0, 1.0, 33)
        assert np.allclose((p + q)(rho), p(rho) + q(rho))
        assert np.allclose((p - q)(rho), p(rho) - q(rho))
        assert np.allclose(p.scaled(2j)(rho), 2j * p(rho))

    def test_l2_inner_exact(self):
        p = ExponentialSum.from_terms([(1.0 + 0.5j, 0, 3.0), (2.0, 2, -1.0)])
        q = ExponentialSum.from_terms([(0.5, 1, 7.0), (-1j, 0, 0.0)])
        want = gauss_integral(lambda r: p(r) * np.conj(q(r)))
        assert abs(p.l2_inner(q) - want) < 1e-13

    def test_norm2_nonnegative(self):
        p = ExponentialSum.from_terms([(1e-9, 0, 40.0)])
        assert p.l2_norm2() >= 0.0
        assert p.l2_norm2() == pytest.approx(1e-18)

    def test_constant(self):
        c = ExponentialSum.constant(3.0 - 1j)
        assert c(0.77) == pytest.approx(3.0 - 1j)


class TestGridSamples:
    def test_validation(self):
        with pytest.raises(ValidationError):
            GridSamples(np.array([1.0]))
        with pytest.raises(ValidationError):
            GridSamples(np.zeros((2, 2)))

    def test_interp_endpoints(self):
        g = GridSamples(np.array([1.0, 2.0, 3.0], dtype=complex))
        assert g.value_at_0() == 1.0
        assert g.value_at_1() == 3.0
        assert g(0.25) == pytest.approx(1.5)

    def test_trapezoid_norm(self):
        rho = np.linspace(0.0, 1.0, 20001)
        g = GridSamples(np.exp(1j * rho))
        assert g.l2_norm2() == pytest.approx(1.0, abs=1e-8)

    def test_mixed_algebra_with_sums(self):
        e = ExponentialSum.constant(1.0)
        g = GridSamples(np.zeros(11, dtype=complex))
        assert np.allclose((g + e).values, 1.0)
        assert (g + e).l2_inner(e) == pytest.approx(1.0)

    def test_size_mismatch(self):
        a = GridSamples(np.zeros(5, dtype=complex))
        b = GridSamples(np.zeros(6, dtype=complex))
        with pytest.raises(ValidationError):
            a + b

    def test_profile_norm_helper(self):
        assert profile_l2_norm2(None) == 0.0
        assert profile_l2_norm2(ExponentialSum.constant(2.0)) == pytest.approx(4.0)


def transport_residual(z, lam, tau, h):
    """Energy of i*lam*z + z'/tau - h for an exponential-sum solve."""
    r = z.derivative().scaled(1.0 / tau) + z.scaled(1j * lam)
    if h is not None:
        r = r - h
    return r.l2_norm2()


class TestTransportSolve:
    @pytest.mark.parametrize("lam,tau", [(3.0, 0.7), (-12.0, 1.0), (0.0, 2.0)])
    def test_homogeneous(self, lam, tau):
        z = transport_solve(1.0 + 2.0j, lam, tau, None)
        assert z.value_at_0() == pytest.approx(1.0 + 2.0j)
        assert transport_residual(z, lam, tau, None) < 1e-24
        assert z.value_at_1() == pytest.approx((1.0 + 2.0j) * cmath.exp(-1j * lam * tau))

    @pytest.mark.parametrize(
        "lam,tau,h_terms",
        [
            (5.0, 0.5, [(1.0, 0, 2.0)]),
            (5.0, 0.5, [(1.0 - 1j, 3, -4.0)]),
            (2.0, 1.0, [(1.0, 0, -2.0)]),  # w = -lam*tau: resonant
            (2.0, 1.0, [(1.0, 0, -2.0 + 1e-8)]),  # near-resonant
            (0.5, 1.0, [(2.0, 4, -0.5)]),  # small omega series branch
            (40.0, 1.0, [(1.0, 1, 3.0), (1j, 0, -40.0)]),
        ],
    )
    def test_forced_residual_and_initial(self, lam, tau, h_terms):
        h = ExponentialSum.from_terms(h_terms)
        z = transport_solve(0.3 - 0.1j, lam, tau, h)
        assert abs(z.value_at_0() - (0.3 - 0.1j)) < 1e-12
        rel = transport_residual(z, lam, tau, h) / max(h.l2_norm2(), 1.0)
        assert rel < 1e-24

    def test_endpoint_matches_solve(self):
        h = ExponentialSum.exponential_form(1.0, 0.5j, 6.0)
        lam, tau = 7.0, 0.8
        z = transport_solve(0.0, lam, tau, h)
        assert abs(transport_endpoint(h, lam, tau) - z.value_at_1()) < 1e-13

    def test_endpoint_none(self):
        assert transport_endpoint(None, 3.0, 1.0) == 0.0

    def test_grid_route_converges_to_exact(self):
        lam, tau = 6.0, 0.9
        h = ExponentialSum.from_terms([(1.0, 2, -1.5)])
        exact = transport_solve(0.5, lam, tau, h)
        g = transport_solve(0.5, lam, tau, h.sample(4001))
        assert isinstance(g, GridSamples)
        err = (g - exact.sample(4001)).l2_norm2() ** 0.5
        assert err < 1e-6
        assert abs(g.value_at_1() - exact.value_at_1()) < 1e-6

    def test_grid_endpoint_route(self):
        lam, tau = 11.0, 0.4
        h = ExponentialSum.exponential_form(2.0, -1.0, 3.0)
        want = transport_endpoint(h, lam, tau)
        got = transport_endpoint(h.sample(8001), lam, tau)
        assert abs(got - want) < 1e-6

    def test_rejects_non_profile(self):
        with pytest.raises(ValidationError):
            transport_solve(0.0, 1.0, 1.0, "h")
        with pytest.raises(ValidationError):
            transport_endpoint(3.14, 1.0, 1.0)
