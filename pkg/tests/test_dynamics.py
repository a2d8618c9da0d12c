"""Tests for the truncated-mode integrator and decay fits.

The sharpest checks ride on characteristic-mode data: a mode started on its
slowest characteristic root follows Re(U e^(st)) exactly, so the integrator
can be measured against a known solution, and fitted energy rates can be
measured against the root located independently by the abscissa search.
"""

import math
import warnings

import numpy as np
import pytest

from thermosemi.core import ModelParams, SystemKind, make_spectrum
from thermosemi.dynamics import (
    DecayFit,
    InitialData,
    Trajectory,
    characteristic_initial,
    fit_decay,
    mode_ode_coefficients,
    simulate,
)
from thermosemi.errors import DivergenceError, FitUndefinedError, ValidationError
from thermosemi.resolvent import spectral_abscissa_estimate

SQ = make_spectrum("power", coefficient=1.0, exponent=2.0)


def hyp(**kw):
    base = dict(beta=0.5, alpha=0.5, a=1.0, tau=0.5, xi=1.0)
    base.update(kw)
    return ModelParams(kind=SystemKind.DELAY_HYPERBOLIC, **base)


def par(**kw):
    base = dict(beta=0.5, alpha=0.5, a=2.0, kappa=1.0, tau=1.0, xi=1.0)
    base.update(kw)
    return ModelParams(kind=SystemKind.DELAY_PARABOLIC, **base)


def string(**kw):
    base = dict(a=1.0, tau=0.5, xi=1.0)
    base.update(kw)
    return ModelParams(kind=SystemKind.DELAYED_DAMPING_STRING, **base)


BASE = ModelParams(kind=SystemKind.NO_DELAY_BASELINE, beta=0.5, alpha=0.5)

SMOOTH3 = InitialData(
    np.array([1.0, 0.25, 1.0 / 9.0]), np.zeros(3), np.array([0.5, -0.25, 0.1])
)


class TestCoefficients:
    def test_hyperbolic(self):
        c = mode_ode_coefficients(hyp(beta=0.5, alpha=0.25, a=3.0), 16.0)
        assert c == (0.0, 16.0, 48.0, 0.0, 4.0, 2.0, 0.0, 4.0)

    def test_parabolic(self):
        c = mode_ode_coefficients(par(beta=0.5, alpha=0.5, a=2.0, kappa=1.5), 16.0)
        assert c == (16.0, 0.0, 0.0, 0.0, 4.0, 8.0, 6.0, 4.0)

    def test_baseline(self):
        c = mode_ode_coefficients(BASE, 16.0)
        assert c == (16.0, 0.0, 0.0, 0.0, 4.0, 4.0, 0.0, 4.0)

    def test_string(self):
        c = mode_ode_coefficients(string(a=2.0), 16.0)
        assert c == (16.0, 0.0, 0.0, 32.0, 4.0, 16.0, 0.0, 4.0)

    def test_bad_mu(self):
        with pytest.raises(ValidationError):
            mode_ode_coefficients(BASE, 0.0)


class TestValidation:
    def test_counts_and_horizon(self):
        with pytest.raises(ValidationError):
            simulate(BASE, SQ, 0, SMOOTH3, 1.0)
        with pytest.raises(ValidationError):
            simulate(BASE, SQ, 3, SMOOTH3, 1.0, M=7)
        with pytest.raises(ValidationError):
            simulate(BASE, SQ, 3, SMOOTH3, 0.0)
        with pytest.raises(ValidationError):
            simulate(BASE, SQ, 3, SMOOTH3, math.inf)

    def test_shapes(self):
        bad = InitialData(np.zeros(2), np.zeros(3), np.zeros(3))
        with pytest.raises(ValidationError):
            simulate(BASE, SQ, 3, bad, 1.0)

    def test_nonfinite_initial(self):
        bad = InitialData(np.array([np.nan, 0.0, 0.0]), np.zeros(3), np.zeros(3))
        with pytest.raises(ValidationError):
            simulate(BASE, SQ, 3, bad, 1.0)

    def test_tuple_promotion(self):
        tr = simulate(BASE, SQ, 2, (np.ones(2), np.zeros(2), np.zeros(2)), 1.0)
        assert tr.total_energy[0] == pytest.approx(1.0 + 4.0)

    def test_history_mismatch_warns(self):
        init = InitialData(
            np.ones(1), np.zeros(1), np.zeros(1), history=lambda t: np.zeros(1)
        )
        with pytest.warns(UserWarning, match="history"):
            simulate(hyp(), make_spectrum([4.0]), 1, init, 1.0)


class TestBasicRuns:
    def test_zero_data_stays_zero(self):
        zero = InitialData(np.zeros(3), np.zeros(3), np.zeros(3))
        for params in (hyp(), par(), BASE, string()):
            tr = simulate(params, SQ, 3, zero, 2.0)
            assert np.all(tr.total_energy == 0.0)

    def test_trajectory_fields(self):
        tr = simulate(par(), SQ, 2, (np.ones(2), np.zeros(2), np.zeros(2)), 2.0)
        assert isinstance(tr, Trajectory)
        assert tr.times[0] == 0.0
        assert tr.times[-1] >= 2.0 - 1e-12
        assert tr.mode_energy.shape == (tr.times.size, 2)
        assert np.allclose(tr.mode_energy.sum(axis=1), tr.total_energy)
        assert tr.m_eff >= 64
        u, v, th = tr.final_state
        assert u.shape == (2,)

    def test_constant_history_default_matches_explicit(self):
        # None history means constant extension of the delayed slot
        init_a = InitialData(np.array([0.3]), np.zeros(1), np.array([0.7]))
        init_b = InitialData(
            np.array([0.3]),
            np.zeros(1),
            np.array([0.7]),
            history=lambda t: np.array([0.7]),
        )
        spec = make_spectrum([4.0])
        ta = simulate(par(), spec, 1, init_a, 2.0)
        tb = simulate(par(), spec, 1, init_b, 2.0)
        assert np.array_equal(ta.total_energy, tb.total_energy)

    def test_mode_decoupling(self):
        # modes never interact: joint run equals single-mode runs per column
        tr = simulate(par(), SQ, 3, SMOOTH3, 2.0, M=64)
        for j in range(3):
            single = InitialData(
                SMOOTH3.u0[j : j + 1], SMOOTH3.u1[j : j + 1], SMOOTH3.theta0[j : j + 1]
            )
            trj = simulate(par(), make_spectrum([SQ.mu(j + 1)]), 1, single, 2.0, M=tr.m_eff)
            assert trj.m_eff == tr.m_eff
            assert np.allclose(trj.mode_energy[:, 0], tr.mode_energy[:, j], rtol=1e-12)


class TestKnownSolution:
    def test_fourth_order_state_convergence(self):
        # one hyperbolic mode on its characteristic root: exact solution known
        params = hyp()
        mu = 4.0
        _, diag = spectral_abscissa_estimate(params, mu, with_diagnostics=True)
        s = complex(diag["root"][0], diag["root"][1])
        cth = -(mu**params.beta) * s / (s + mu**params.alpha)
        spec = make_spectrum([mu])
        T = 4.0
        errs = []
        for M in (16, 32, 64, 128):
            init = InitialData(
                np.array([1.0]),
                np.array([s.real]),
                np.array([cth.real]),
                history=lambda t: np.array([np.real(np.exp(s * t))]),
            )
            tr = simulate(params, spec, 1, init, T, M=M)
            uf, vf, tf = tr.final_state
            exact = np.exp(s * T)
            err = math.sqrt(
                (uf[0] - exact.real) ** 2
                + (vf[0] - (s * exact).real) ** 2
                + (tf[0] - (cth * exact).real) ** 2
            )
            errs.append(err)
        ratios = [errs[i] / errs[i + 1] for i in range(3)]
        for r in ratios:
            assert 16 / 3 < r < 48, ratios

    def test_step_doubling_energy_change_small(self):
        spec = SQ
        init = InitialData(np.array([1.0, 0.5]), np.zeros(2), np.array([0.2, -0.1]))
        params = par(tau=0.5)
        vals = {}
        for M in (256, 512):
            vals[M] = simulate(params, spec, 2, init, 8.0, M=M).total_energy[-1]
        rel = abs(vals[512] - vals[256]) / abs(vals[256])
        assert rel <= 1e-5

    def test_decay_rate_matches_abscissa_stable_mode(self):
        params = hyp()
        init = characteristic_initial(params, make_spectrum([4.0]), 1)
        tr = simulate(params, make_spectrum([4.0]), 1, init, 6.0, M=64)
        fit = fit_decay(tr, (1.0, 6.0))
        want = -spectral_abscissa_estimate(params, 4.0)
        assert fit.rate == pytest.approx(want, rel=2e-2)

    def test_growth_rate_matches_abscissa_unstable_mode(self):
        # delayed damping destabilizes this mode; the integrator and the
        # characteristic root finder must agree on the growth rate
        params = string()
        val = spectral_abscissa_estimate(params, 4.0)
        assert val > 0.5
        init = characteristic_initial(params, make_spectrum([4.0]), 1)
        tr = simulate(params, make_spectrum([4.0]), 1, init, 12.0, M=32)
        assert tr.total_energy[-1] > 1e4 * tr.total_energy[0]
        fit = fit_decay(tr, (2.0, 12.0))
        assert fit.rate == pytest.approx(-val, rel=2e-2)


class TestDissipation:
    HYP_POINTS = [(0.5, 0.5), (0.25, 0.25), (0.75, 0.5), (1.0, 1.0)]
    PAR_POINTS = [(0.5, 0.5), (0.1, 0.9), (0.75, 0.5), (0.25, 0.0)]

    @staticmethod
    def worst_step_increase(tr):
        e = tr.total_energy
        return float(np.max(np.diff(e) / np.maximum(e[:-1], 1e-300)))

    @pytest.mark.parametrize("xi", [1.0, 2.0])
    @pytest.mark.parametrize("point", HYP_POINTS, ids=str)
    def test_hyperbolic_characteristic_data(self, point, xi):
        params = hyp(beta=point[0], alpha=point[1], xi=xi)
        init = characteristic_initial(params, SQ, 3)
        tr = simulate(params, SQ, 3, init, 3.0, M=16)
        assert self.worst_step_increase(tr) <= 1e-8

    @pytest.mark.parametrize("xi", [1.0, 3.0])
    @pytest.mark.parametrize("point", PAR_POINTS, ids=str)
    def test_parabolic_any_data(self, point, xi):
        # the parabolic history form is negative semidefinite for admissible
        # xi, so arbitrary smooth data must dissipate
        params = par(beta=point[0], alpha=point[1], xi=xi)
        tr = simulate(params, SQ, 3, SMOOTH3, 3.0, M=16)
        assert self.worst_step_increase(tr) <= 1e-8

    @pytest.mark.parametrize("point", [(0.5, 0.5), (0.25, 0.75)], ids=str)
    def test_baseline_any_data(self, point):
        params = ModelParams(
            kind=SystemKind.NO_DELAY_BASELINE, beta=point[0], alpha=point[1]
        )
        tr = simulate(params, SQ, 3, SMOOTH3, 3.0, M=16)
        assert self.worst_step_increase(tr) <= 1e-8

    def test_string_alternating_mode_stability(self):
        # the delayed-damping string is not uniformly stable: the sign of the
        # abscissa depends on the phase of the delay against the mode
        # frequency (frozen: stable, unstable, stable for n = 1, 2, 3)
        params = string()
        vals = [spectral_abscissa_estimate(params, float(n * n)) for n in (1, 2, 3)]
        assert vals[0] == pytest.approx(-0.6367, abs=2e-3)
        assert vals[1] == pytest.approx(0.6246, abs=2e-3)
        assert vals[2] == pytest.approx(-0.6876, abs=2e-3)


class TestCrosscheck:
    def test_alt_history_energy_agrees(self):
        # M=128 aligns the upwind grid with the step (CFL 1, exact shift)
        params = par()
        spec = make_spectrum([1.0])
        init = InitialData(np.array([1.0]), np.zeros(1), np.array([0.5]))
        tr = simulate(params, spec, 1, init, 4.0, M=128, z_crosscheck=True)
        assert tr.z_energy_alt is not None
        assert tr.z_energy_alt.shape == tr.total_energy.shape
        # initial window energy is exactly xi * (mu^(alpha/2) * theta0)^2
        assert tr.z_energy_alt[0] == pytest.approx(0.25)
        uf, vf, tf = tr.final_state
        scalar_f = float(tr.mus[0] * uf[0] ** 2 + vf[0] ** 2 + tf[0] ** 2)
        win_f = tr.total_energy[-1] - scalar_f
        assert tr.z_energy_alt[-1] == pytest.approx(win_f, abs=1e-9)

    def test_alt_absent_by_default_and_for_baseline(self):
        spec = make_spectrum([1.0])
        init = InitialData(np.ones(1), np.zeros(1), np.zeros(1))
        assert simulate(par(), spec, 1, init, 1.0).z_energy_alt is None
        assert (
            simulate(BASE, spec, 1, init, 1.0, z_crosscheck=True).z_energy_alt is None
        )


class TestDivergence:
    def test_unstable_mode_overflows_with_huge_data(self):
        params = string(a=2.0, tau=2.0)
        init = InitialData(np.array([1e300]), np.zeros(1), np.zeros(1))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            with pytest.raises(DivergenceError) as exc:
                simulate(params, make_spectrum([9.0]), 1, init, 40.0, M=16)
        assert exc.value.first_bad_time is not None
        assert 0.0 < exc.value.first_bad_time <= 40.0


def synthetic_trajectory(times, energy):
    times = np.asarray(times, dtype=float)
    energy = np.asarray(energy, dtype=float)
    return Trajectory(
        times=times,
        total_energy=energy,
        mode_energy=energy[:, None],
        params=BASE,
        mus=np.array([1.0]),
        m_eff=64,
    )


class TestFitDecay:
    def test_exponential_rate(self):
        t = np.linspace(0.0, 10.0, 201)
        tr = synthetic_trajectory(t, np.exp(-2.0 * t))
        fit = fit_decay(tr, (0.0, 10.0))
        assert isinstance(fit, DecayFit)
        assert fit.rate == pytest.approx(1.0, abs=1e-3)
        assert fit.fit_quality == pytest.approx(1.0, abs=1e-9)
        assert fit.quality_defined

    def test_polynomial_order(self):
        t = np.linspace(1.0, 9.0, 201)
        tr = synthetic_trajectory(t, t**-4.0)
        fit = fit_decay(tr, (1.0, 9.0), model="polynomial")
        assert fit.rate == pytest.approx(2.0, abs=1e-3)
        assert fit.model == "polynomial"

    def test_constant_energy_quality_undefined(self):
        t = np.linspace(0.0, 5.0, 101)
        tr = synthetic_trajectory(t, np.ones_like(t))
        fit = fit_decay(tr, (0.0, 5.0))
        assert fit.rate == pytest.approx(0.0, abs=1e-6)
        assert not fit.quality_defined
        assert math.isnan(fit.fit_quality)

    def test_caveat_mentions_truncation(self):
        t = np.linspace(0.0, 5.0, 101)
        fit = fit_decay(synthetic_trajectory(t, np.exp(-t)), (0.0, 5.0))
        assert "truncat" in fit.caveat or "finite" in fit.caveat

    def test_window_validation(self):
        t = np.linspace(0.0, 5.0, 101)
        tr = synthetic_trajectory(t, np.exp(-t))
        with pytest.raises(ValidationError):
            fit_decay(tr, (3.0, 3.0))
        with pytest.raises(ValidationError):
            fit_decay(tr, (0.0, 5.0), model="cubic")
        with pytest.raises(ValidationError):
            fit_decay(tr, (0.0, 5.0), model="polynomial")  # t0 = 0 not allowed

    def test_fit_undefined_cases(self):
        t = np.linspace(0.0, 5.0, 101)
        tr = synthetic_trajectory(t, np.exp(-t))
        with pytest.raises(FitUndefinedError):
            fit_decay(tr, (4.9, 5.0))  # too few samples
        dead = synthetic_trajectory(t, np.concatenate([np.ones(50), np.zeros(51)]))
        with pytest.raises(FitUndefinedError):
            fit_decay(dead, (0.0, 5.0))


class TestCharacteristicInitial:
    def test_shapes_and_scaling(self):
        init = characteristic_initial(hyp(), SQ, 3)
        assert init.u0.shape == (3,)
        assert init.u0[0] == pytest.approx(1.0)  # 1/mu_1
        assert init.u0[2] == pytest.approx(1.0 / 9.0)
        assert init.history is not None
        # history joins the initial delayed component continuously
        start = init.history(0.0)
        assert np.allclose(start, init.u0, rtol=1e-12)

    def test_baseline_has_no_history(self):
        init = characteristic_initial(BASE, SQ, 2)
        assert init.history is None

    def test_validation(self):
        with pytest.raises(ValidationError):
            characteristic_initial(hyp(), SQ, 0)
