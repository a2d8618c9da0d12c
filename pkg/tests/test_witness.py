"""Tests for the witness constructions.

The parabolic resonant branch admits a closed-form ratio (the thermal
component cancels exactly when lam^2 = mu), which pins the whole pipeline:
ratio^2 = tau^2/3 + 2*kappa^2*tau^2*mu^(-2p)/xi. Everything else is checked
by residuals back in the mode equations plus a few frozen reference numbers.
"""

import math

import pytest

from thermosemi.core import ModelParams, SystemKind, make_spectrum, mode_energy2
from thermosemi.errors import (
    OverflowRangeError,
    UnsupportedCaseError,
    ValidationError,
)
from thermosemi.resolvent import forcing_norm2, mode_residual
from thermosemi.witness import (
    CERTIFICATE,
    ExponentChoice,
    StringWitness,
    build_witness_mode,
    richardson_extrapolate,
    select_exponents,
    string_witness,
    witness_sweep,
)


def hyp(beta, alpha, **kw):
    base = dict(a=1.0, tau=1.0, xi=2.0)
    base.update(kw)
    return ModelParams(kind=SystemKind.DELAY_HYPERBOLIC, beta=beta, alpha=alpha, **base)


def par(beta, alpha, **kw):
    base = dict(a=2.0, kappa=1.0, tau=1.0, xi=3.0)
    base.update(kw)
    return ModelParams(kind=SystemKind.DELAY_PARABOLIC, beta=beta, alpha=alpha, **base)


class TestSelectExponents:
    def test_hyp_alpha_positive(self):
        e = select_exponents(hyp(0.5, 0.5))
        assert e == ExponentChoice(0.5, 0.5, 0.0, "hyp-alpha-positive")
        e = select_exponents(hyp(0.25, 0.75))
        assert e.p == pytest.approx(0.5 - 0.25 + 0.75)
        assert e.q == 0.75

    def test_hyp_alpha_zero(self):
        e = select_exponents(hyp(0.3, 0.0))
        assert e.case == "hyp-alpha-zero"
        assert e.q == e.delta == 0.25
        assert e.p == pytest.approx(0.5 - 0.3 + 0.25)
        e2 = select_exponents(hyp(0.3, 0.0), delta=0.4)
        assert e2.q == 0.4

    def test_par_equality(self):
        e = select_exponents(par(0.75, 0.5))
        assert e == ExponentChoice(0.5, 0.5, 0.0, "par-equality")

    def test_par_resonant(self):
        e = select_exponents(par(0.5, 0.5))
        assert e.case == "par-resonant"
        assert (e.p, e.q) == (0.25, 0.5)

    def test_par_small_q(self):
        e = select_exponents(par(0.25, 0.5))
        assert e.case == "par-small-q"
        assert e.q == e.delta == 0.25
        assert e.p == pytest.approx(0.25 + 0.5)

    def test_par_alpha_zero(self):
        e = select_exponents(par(0.3, 0.0))
        assert e.case == "par-alpha-zero"
        assert e.p == pytest.approx(0.7)

    def test_unsupported_corner(self):
        with pytest.raises(UnsupportedCaseError):
            select_exponents(par(0.5, 0.0))

    def test_outside_square_rejected(self):
        with pytest.raises(ValidationError):
            select_exponents(hyp(1.0, 0.0))
        with pytest.raises(ValidationError):
            select_exponents(par(0.9, 0.5))

    def test_delta_on_fixed_case_rejected(self):
        with pytest.raises(ValidationError):
            select_exponents(hyp(0.5, 0.5), delta=0.1)
        with pytest.raises(ValidationError):
            select_exponents(par(0.5, 0.5), delta=0.1)

    def test_delta_out_of_range_rejected(self):
        with pytest.raises(ValidationError):
            select_exponents(hyp(0.3, 0.0), delta=0.6)
        with pytest.raises(ValidationError):
            select_exponents(hyp(0.3, 0.0), delta=0.0)

    def test_other_kinds_rejected(self):
        p = ModelParams(kind=SystemKind.NO_DELAY_BASELINE, beta=0.5, alpha=0.5)
        with pytest.raises(ValidationError):
            select_exponents(p)


class TestBuildWitnessMode:
    def test_reference_components_at_1e4(self):
        # hyperbolic (1/2, 1/2), a=1, tau=1: at mu = 1e4 the raw pieces are
        # v = (1+i)/100, sqrt(mu)*u = (1-i)/100, theta = -1/100, phi ~ -(1+i)
        wm = build_witness_mode(hyp(0.5, 0.5), 1e4)
        row = wm.row
        assert row.lam == pytest.approx(100.0)
        scale = row.norm_f  # stored state was divided by this
        v = wm.state.v * scale
        u = wm.state.u * scale
        theta = wm.state.theta * scale
        assert v == pytest.approx((1 + 1j) * 1e-2)
        assert 100.0 * u == pytest.approx((1 - 1j) * 1e-2)
        assert theta == pytest.approx(-1e-2)
        assert row.phi == pytest.approx(-(1 + 1j), abs=0.05)

    def test_unit_forcing_and_ratio(self):
        params = hyp(0.5, 0.5)
        wm = build_witness_mode(params, 4096.0)
        assert forcing_norm2(params, 4096.0, wm.forcing) == pytest.approx(1.0)
        assert math.sqrt(mode_energy2(params, 4096.0, wm.state)) == pytest.approx(
            wm.row.ratio
        )
        assert wm.row.ratio == pytest.approx(wm.row.norm_u / wm.row.norm_f)

    @pytest.mark.parametrize(
        "params",
        [
            hyp(0.5, 0.5),
            hyp(0.25, 0.75),
            hyp(0.3, 0.0),
            hyp(1.0, 1.0),
            par(0.5, 0.5),
            par(0.75, 0.5),
            par(0.25, 0.5),
            par(0.3, 0.0),
        ],
        ids=lambda p: "%s-b%g-a%g" % (p.kind.value[6:9], p.beta, p.alpha),
    )
    @pytest.mark.parametrize("mu", [25.0, 1e4, 1e8])
    def test_residuals_tiny(self, params, mu):
        wm = build_witness_mode(params, mu)
        assert wm.row.residual <= 1e-9
        # recheck through the public residual function
        r = mode_residual(params, mu, wm.lam, wm.state, wm.forcing)
        assert r == pytest.approx(wm.row.residual, abs=1e-12)

    def test_par_resonant_closed_form(self):
        params = par(0.5, 0.5)
        e = select_exponents(params)
        prev = math.inf
        for mu in (100.0, 1e4, 1e6, 1e8):
            wm = build_witness_mode(params, mu)
            want = math.sqrt(
                params.tau**2 / 3
                + 2 * params.kappa**2 * params.tau**2 * mu ** (-2 * e.p) / params.xi
            )
            assert wm.row.ratio == pytest.approx(want, rel=1e-12)
            assert abs(wm.state.theta) < 1e-12  # exact thermal cancellation
            assert wm.row.ratio < prev  # monotone from above
            prev = wm.row.ratio
        assert prev > params.tau / math.sqrt(3.0)

    def test_par_equality_unit_forcing_coefficient(self):
        wm = build_witness_mode(par(0.75, 0.5), 1e4)
        assert wm.row.phi == pytest.approx(-1.0)
        assert wm.state.theta == 0

    def test_par_small_q_stays_positive(self):
        # the ratio oscillates with mu on this branch but never collapses
        params = par(0.25, 0.5)
        ratios = [
            build_witness_mode(params, float(n * n)).row.ratio
            for n in range(20, 200, 13)
        ]
        assert min(ratios) > 0.25

    def test_mu_validation(self):
        with pytest.raises(ValidationError):
            build_witness_mode(hyp(0.5, 0.5), 0.0)
        with pytest.raises(OverflowRangeError):
            build_witness_mode(hyp(0.5, 0.5), 2e13)

    def test_hyp_ratio_approaches_limit(self):
        params = hyp(0.5, 0.5)
        r = build_witness_mode(params, 4096.0**2).row.ratio
        assert r == pytest.approx(params.tau / math.sqrt(3.0), rel=2e-2)


class TestRichardson:
    def test_exact_polynomial_in_reciprocal_index(self):
        # values of 2 + 3/n - 5/n^2 at n = 10, 20, 40 extrapolate to 2
        f = lambda n: 2.0 + 3.0 / n - 5.0 / n**2
        got = richardson_extrapolate([10, 20, 40], [f(10), f(20), f(40)])
        assert got == pytest.approx(2.0, abs=1e-12)

    def test_two_points_linear(self):
        f = lambda n: 1.0 + 4.0 / n
        got = richardson_extrapolate([8, 16], [f(8), f(16)])
        assert got == pytest.approx(1.0, abs=1e-12)

    def test_single_point(self):
        assert richardson_extrapolate([5], [3.25]) == 3.25

    def test_uses_last_three(self):
        f = lambda n: 7.0 - 2.0 / n
        vals = [100.0, f(4), f(8), f(16)]  # junk first entry must be ignored
        got = richardson_extrapolate([2, 4, 8, 16], vals)
        assert got == pytest.approx(7.0, abs=1e-12)

    def test_degenerate_indices_fall_back(self):
        assert richardson_extrapolate([4, 4, 4], [1.0, 2.0, 3.0]) == 3.0

    def test_validation(self):
        with pytest.raises(ValidationError):
            richardson_extrapolate([], [])
        with pytest.raises(ValidationError):
            richardson_extrapolate([1, 2], [1.0])


class TestWitnessSweep:
    def test_hyperbolic_family_certifies(self):
        params = hyp(0.5, 0.5)
        spec = make_spectrum("power", coefficient=1.0, exponent=2.0)
        out = witness_sweep(params, spec, [16, 64, 256, 1024])
        assert out.certified
        assert out.criterion == CERTIFICATE
        assert out.limit_estimate == pytest.approx(1.0 / math.sqrt(3.0), rel=2e-2)
        assert "not immediately norm-continuous" in out.conclusion
        assert [r.n for r in out.rows] == [16, 64, 256, 1024]

    def test_lambda_grows_without_bound(self):
        params = hyp(0.5, 0.5)
        spec = make_spectrum("power", coefficient=1.0, exponent=2.0)
        out = witness_sweep(params, spec, [4, 16, 64])
        lams = [r.lam for r in out.rows]
        assert lams == sorted(lams)
        assert lams[-1] > 8 * lams[0]

    def test_string_kind_routes_to_string_witness(self):
        params = ModelParams(
            kind=SystemKind.DELAYED_DAMPING_STRING, a=1.0, tau=1.0, xi=2.0
        )
        spec = make_spectrum("string")
        out = witness_sweep(params, spec, [51, 101, 201])
        assert out.certified
        assert all(r.exponents.case == "string-odd" for r in out.rows)

    def test_index_validation(self):
        params = hyp(0.5, 0.5)
        spec = make_spectrum("string")
        with pytest.raises(ValidationError):
            witness_sweep(params, spec, [])
        with pytest.raises(ValidationError):
            witness_sweep(params, spec, [0, 4])
        with pytest.raises(ValidationError):
            witness_sweep(params, spec, [4, 4])


class TestStringWitness:
    def test_frozen_forcing_coefficients(self):
        # phi -> -2i with an O(1/n^2) remainder whose size depends on the
        # phase of e^(-i n^2); these three are pinned from the formula
        for n, want in ((51, 2.3273), (101, 1.2465), (201, 2.1794)):
            sw = string_witness(n)
            assert abs(sw.row.phi + 2j) * n**2 == pytest.approx(want, abs=2e-3)

    def test_mode_numbers(self):
        sw = string_witness(101)
        assert isinstance(sw, StringWitness)
        assert sw.row.mu == 101.0**2
        assert sw.row.lam == 101.0**2
        assert sw.row.residual < 1e-12
        assert sw.row.ratio == pytest.approx(1.0 / math.sqrt(3.0), rel=3e-2)

    def test_coefficient_with_stronger_damping(self):
        sw = string_witness(101, a=2.0)
        assert sw.row.phi == pytest.approx(-1.0 - 3.0j, abs=1e-3)

    def test_even_index_rejected(self):
        with pytest.raises(UnsupportedCaseError):
            string_witness(100)

    def test_validation(self):
        with pytest.raises(ValidationError):
            string_witness(0)
        with pytest.raises(ValidationError):
            string_witness(3, a=-1.0)
        with pytest.raises(ValidationError):
            string_witness(3, xi=0.0)

    def test_default_history_weight(self):
        # default xi is the smallest admissible value 2*tau/a
        sw1 = string_witness(11, a=1.0, tau=1.0)
        sw2 = string_witness(11, a=1.0, tau=1.0, xi=2.0)
        assert sw1.row.ratio == pytest.approx(sw2.row.ratio)
