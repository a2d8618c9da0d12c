"""Time-domain integration of truncated mode systems and decay-rate fits.

Each mode obeys a scalar second-order equation coupled to a scalar thermal
equation, possibly with one delayed quantity; modes never talk to each
other, so the truncated system is a batch of independent small ODEs stepped
together. The integrator is classical RK4 by the method of steps: the step
divides the delay exactly, delayed values at stage midpoints come from a
cubic Hermite interpolant of the stored trajectory, and history on [-tau, 0]
is queried directly from the caller's function.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import ModelParams, Spectrum, SystemKind
from .errors import DivergenceError, FitUndefinedError, ValidationError


def mode_ode_coefficients(params: ModelParams, mu: float) -> tuple:
    """Coefficients (c_u, c_ud, c_v, c_vd, c_couple, c_th, c_thd, c_cross).

    They encode, per mode,

        u'' + c_u*u + c_ud*u(t-tau) + c_v*u' + c_vd*u'(t-tau) = c_couple*theta
        theta' + c_th*theta + c_thd*theta(t-tau) + c_cross*u' = 0

    with exactly one of the delayed slots active per kind: the hyperbolic
    kind delays the stiffness term, the parabolic kind the thermal damping,
    the string its damping; the baseline has no delay.
    """
    if mu <= 0:
        raise ValidationError("mu must be positive")
    k = params.kind
    a, be, al = params.a, params.beta, params.alpha
    if k is SystemKind.DELAY_HYPERBOLIC:
        return (0.0, mu, a * mu, 0.0, mu**be, mu**al, 0.0, mu**be)
    if k is SystemKind.DELAY_PARABOLIC:
        return (mu, 0.0, 0.0, 0.0, mu**be, a * mu**al, params.kappa * mu**al, mu**be)
    if k is SystemKind.NO_DELAY_BASELINE:
        return (mu, 0.0, 0.0, 0.0, mu**be, mu**al, 0.0, mu**be)
    if k is SystemKind.DELAYED_DAMPING_STRING:
        rmu = math.sqrt(mu)
        return (mu, 0.0, 0.0, a * mu, rmu, mu, 0.0, rmu)
    raise ValidationError("unknown kind %s" % k)


def _delayed_slot(params: ModelParams) -> Optional[str]:
    k = params.kind
    if k is SystemKind.DELAY_HYPERBOLIC:
        return "u"
    if k is SystemKind.DELAY_PARABOLIC:
        return "theta"
    if k is SystemKind.DELAYED_DAMPING_STRING:
        return "v"
    return None


@dataclass(frozen=True)
class InitialData:
    """Initial displacement, velocity, temperature, and delayed history.

    ``history(t)`` must accept t in [-tau, 0] (scalar) and return the
    delayed quantity per mode at that time: u for the hyperbolic kind,
    theta for the parabolic one, v for the string. None means the initial
    value of that quantity extended as a constant over the history window.
    """

    u0: np.ndarray
    u1: np.ndarray
    theta0: np.ndarray
    history: Optional[Callable[[float], np.ndarray]] = None


@dataclass(frozen=True)
class Trajectory:
    """Sampled energies of a truncated run."""

    times: np.ndarray
    total_energy: np.ndarray
    mode_energy: np.ndarray  # shape (len(times), n_modes)
    params: ModelParams
    mus: np.ndarray
    m_eff: int
    z_energy_alt: Optional[np.ndarray] = None  # transport-grid cross-check
    final_state: Optional[tuple] = None  # (u, u', theta) arrays at times[-1]


def simulate(
    params: ModelParams,
    spectrum: Spectrum,
    n_modes: int,
    initial,
    T: float,
    M: int = 64,
    z_crosscheck: bool = False,
) -> Trajectory:
    """Integrate the first n_modes modes over [0, T].

    ``M`` is the number of steps per delay block (per unit time for the
    baseline, which has no delay); at least 8. The step is refined
    automatically when the stiffest mode would make RK4 unstable: with
    sigma = c_v + |c_vd| + c_th + |c_thd| + sqrt(c_u + |c_ud|) at the
    largest eigenvalue, the effective M is at least ceil(2*sigma*block).

    Energies are recorded at every step: the scalar part per mode plus, for
    delayed kinds, the history term xi/tau times the trapezoid integral of
    the squared trace over the trailing delay window. State integration is
    fourth order in the step; the window quadrature is second order, so
    reported energies converge at second order even though the trajectory
    itself converges at fourth. A nonfinite state aborts with
    DivergenceError carrying the first bad time.
    """
    if n_modes < 1:
        raise ValidationError("n_modes must be >= 1")
    if M < 8:
        raise ValidationError("M must be >= 8")
    if not (T > 0 and math.isfinite(T)):
        raise ValidationError("T must be positive")
    if not isinstance(initial, InitialData):
        initial = InitialData(*initial)
    u0 = np.asarray(initial.u0, dtype=float)
    v0 = np.asarray(initial.u1, dtype=float)
    th0 = np.asarray(initial.theta0, dtype=float)
    for name, arr in (("u0", u0), ("u1", v0), ("theta0", th0)):
        if arr.shape != (n_modes,):
            raise ValidationError("%s must have shape (n_modes,)" % name)
        if not np.all(np.isfinite(arr)):
            raise ValidationError("%s must be finite" % name)

    mus = spectrum.head(n_modes)
    coefs = np.array([mode_ode_coefficients(params, mu) for mu in mus], dtype=float)
    c_u, c_ud, c_v, c_vd, c_cp, c_th, c_thd, c_cr = (coefs[:, j] for j in range(8))

    delayed = _delayed_slot(params)
    block = params.tau if delayed else 1.0
    sigma = float(
        np.max(c_v + np.abs(c_vd) + c_th + np.abs(c_thd) + np.sqrt(c_u + np.abs(c_ud)))
    )
    m_eff = max(int(M), int(math.ceil(2.0 * sigma * block)))
    h = block / m_eff
    n_steps = int(math.ceil(T / h - 1e-9))

    hist = initial.history
    if delayed:
        start = {"u": u0, "v": v0, "theta": th0}[delayed]
        if hist is None:
            # constant extension of the delayed component; no history jump
            frozen = start.copy()
            hist = lambda t: frozen
        gap = np.max(np.abs(np.asarray(hist(0.0), dtype=float) - start))
        scale = max(1.0, float(np.max(np.abs(start))))
        if gap > 1e-9 * scale:
            warnings.warn(
                "history(0) disagrees with the initial %s by %.3g; the run "
                "continues from the stated initial data" % (delayed, gap)
            )

    # state arrays over nodes 0..n_steps; rhs stored for Hermite midpoints
    shape = (n_steps + 1, n_modes)
    U = np.zeros(shape)
    V = np.zeros(shape)
    TH = np.zeros(shape)
    dU = np.zeros(shape)
    dV = np.zeros(shape)
    dTH = np.zeros(shape)
    U[0], V[0], TH[0] = u0, v0, th0

    def rhs(u, v, th, dval):
        du = v
        dv = -c_u * u - c_v * v + c_cp * th
        dth = -c_th * th - c_cr * v
        if delayed == "u":
            dv = dv - c_ud * dval
        elif delayed == "v":
            dv = dv - c_vd * dval
        elif delayed == "theta":
            dth = dth - c_thd * dval
        return du, dv, dth

    def delayed_series(node):
        # delayed quantity and its derivative at a stored node >= 0
        if delayed == "u":
            return U[node], dU[node]
        if delayed == "v":
            return V[node], dV[node]
        return TH[node], dTH[node]

    def delayed_at(node, t):
        # value of the delayed quantity at node (aligned) or its right
        # midpoint (node + 1/2); negative times query the history function
        if not delayed:
            return None
        if t < -1e-12:
            return np.asarray(hist(t), dtype=float)
        if node >= 0:
            return delayed_series(node)[0]
        return np.asarray(hist(max(t, 0.0)), dtype=float)

    def delayed_mid(node, t):
        if not delayed:
            return None
        if t < -1e-12:
            return np.asarray(hist(t), dtype=float)
        if node >= 0 and node + 1 <= n_steps:
            y0, d0 = delayed_series(node)
            y1, d1 = delayed_series(node + 1)
            return (y0 + y1) / 2 + h * (d0 - d1) / 8
        return np.asarray(hist(min(t, 0.0)), dtype=float)

    dU[0], dV[0], dTH[0] = rhs(u0, v0, th0, delayed_at(-m_eff, -block))

    for k in range(n_steps):
        t = k * h
        j = k - m_eff
        d0 = delayed_at(j, t - block)
        dm = delayed_mid(j, t + h / 2 - block)
        d1 = delayed_at(j + 1, t + h - block)
        u, v, th = U[k], V[k], TH[k]
        k1 = rhs(u, v, th, d0)
        k2 = rhs(u + h / 2 * k1[0], v + h / 2 * k1[1], th + h / 2 * k1[2], dm)
        k3 = rhs(u + h / 2 * k2[0], v + h / 2 * k2[1], th + h / 2 * k2[2], dm)
        k4 = rhs(u + h * k3[0], v + h * k3[1], th + h * k3[2], d1)
        U[k + 1] = u + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        V[k + 1] = v + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        TH[k + 1] = th + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        nxt = rhs(U[k + 1], V[k + 1], TH[k + 1], d1)
        dU[k + 1], dV[k + 1], dTH[k + 1] = nxt
        if (k + 1) % m_eff == 0 or k + 1 == n_steps:
            lo = k + 1 - m_eff + 1
            if not (
                np.all(np.isfinite(U[lo : k + 2]))
                and np.all(np.isfinite(V[lo : k + 2]))
                and np.all(np.isfinite(TH[lo : k + 2]))
            ):
                bad = _first_bad_time(U, V, TH, h)
                raise DivergenceError(
                    "state became nonfinite near t=%.6g; reduce the step or the"
                    " horizon" % bad,
                    first_bad_time=bad,
                )

    times = np.arange(n_steps + 1) * h
    mode_e = mus[None, :] * U**2 + V**2 + TH**2

    z_alt = None
    if delayed:
        trace_w = {"u": np.sqrt(mus), "v": np.sqrt(mus), "theta": mus ** (params.alpha / 2)}[
            delayed
        ]
        series = {"u": U, "v": V, "theta": TH}[delayed]
        # prehistory nodes at t = -tau .. -h
        pre = np.empty((m_eff, n_modes))
        for i in range(m_eff):
            pre[i] = np.asarray(hist((i - m_eff) * h), dtype=float)
        ext = np.vstack([pre, series]) * trace_w[None, :]
        sq = ext**2
        csum = np.concatenate([np.zeros((1, n_modes)), np.cumsum(sq, axis=0)])
        # trailing-window trapezoid: nodes k .. k+m_eff in extended indexing
        upper = np.arange(n_steps + 1) + m_eff
        win = csum[upper + 1] - csum[upper - m_eff] - 0.5 * (sq[upper] + sq[upper - m_eff])
        mode_e = mode_e + (params.xi / params.tau) * h * win
        if z_crosscheck:
            z_alt = _upwind_z_energy(params, trace_w, ext, h, m_eff, n_steps)

    total = mode_e.sum(axis=1)
    final = (U[-1].copy(), V[-1].copy(), TH[-1].copy())
    return Trajectory(times, total, mode_e, params, mus, m_eff, z_alt, final)


def _first_bad_time(U, V, TH, h) -> float:
    bad = ~(np.isfinite(U).all(axis=1) & np.isfinite(V).all(axis=1) & np.isfinite(TH).all(axis=1))
    idx = int(np.argmax(bad))
    return idx * h


def _upwind_z_energy(params, trace_w, ext, h, m_eff, n_steps, r_pts=129):
    """First-order upwind transport of the history variable, for cross-checks.

    Independent of the window-integral bookkeeping: evolves z on a rho grid
    with the trace as inflow boundary and returns the total history energy
    xi * integral of z^2, summed over modes, at every step.
    """
    n_modes = ext.shape[1]
    drho = 1.0 / (r_pts - 1)
    tau = params.tau
    # initialize from prehistory: z(rho, 0) = trace(-tau*rho)
    z = np.empty((r_pts, n_modes))
    for j in range(r_pts):
        t = -tau * (j * drho)
        pos = t / h + m_eff  # fractional extended index
        lo = int(math.floor(pos))
        frac = pos - lo
        lo = min(max(lo, 0), ext.shape[0] - 1)
        hi = min(lo + 1, ext.shape[0] - 1)
        z[j] = ext[lo] * (1 - frac) + ext[hi] * frac
    out = np.empty(n_steps + 1)
    out[0] = params.xi * np.trapezoid((z**2).sum(axis=1), dx=drho)
    n_sub = max(1, int(math.ceil((r_pts - 1) * h / tau)))
    hsub = h / n_sub
    cfl = hsub / (tau * drho)
    for k in range(1, n_steps + 1):
        for s in range(n_sub):
            tb = (k - 1) * h + (s + 1) * hsub
            pos = tb / h + m_eff
            lo = int(math.floor(pos))
            frac = pos - lo
            hi = min(lo + 1, ext.shape[0] - 1)
            inflow = ext[lo] * (1 - frac) + ext[hi] * frac
            z[1:] = z[1:] - cfl * (z[1:] - z[:-1])
            z[0] = inflow
        out[k] = params.xi * np.trapezoid((z**2).sum(axis=1), dx=drho)
    return out


# ---------------------------------------------------------------------------
# decay fits


@dataclass(frozen=True)
class DecayFit:
    """Least-squares decay fit of the total energy on a time window.

    ``rate`` is omega with E ~ exp(-2*omega*t) for the exponential model and
    the order r with E ~ t^(-2*r) for the polynomial one. ``fit_quality`` is
    the coefficient of determination of the linearized fit; it is flagged
    undefined (NaN, quality_defined False) when the energy is constant on
    the window.
    """

    model: str
    rate: float
    fit_quality: float
    quality_defined: bool
    window: tuple
    n_modes: int
    caveat: str


_CAVEAT = (
    "rates describe the truncated %d-mode system on the fitted window; the "
    "infinite system can decay more slowly than every finite truncation"
)


def fit_decay(traj: Trajectory, window: tuple, model: str = "exponential") -> DecayFit:
    """Fit a decay law to the total energy of a trajectory.

    ``model`` is "exponential" (log-linear fit) or "polynomial" (log-log
    fit; the window must then start at positive time). The window needs at
    least ten samples, all with positive energy.
    """
    if model not in ("exponential", "polynomial"):
        raise ValidationError("model must be 'exponential' or 'polynomial'")
    t0, t1 = float(window[0]), float(window[1])
    if not t0 < t1:
        raise ValidationError("window must satisfy t0 < t1")
    mask = (traj.times >= t0) & (traj.times <= t1)
    t = traj.times[mask]
    e = traj.total_energy[mask]
    if t.size < 10:
        raise FitUndefinedError("window holds %d samples; need at least 10" % t.size)
    if np.any(e <= 0):
        raise FitUndefinedError("nonpositive energies in the fit window")
    if model == "polynomial":
        if t[0] <= 0:
            raise ValidationError("polynomial fits need a window with t0 > 0")
        x = np.log(t)
    else:
        x = t
    y = np.log(e)
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot < 1e-20:
        quality, defined = float("nan"), False
    else:
        quality = min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
        defined = True
    n_modes = traj.mode_energy.shape[1]
    return DecayFit(
        model=model,
        rate=-float(slope) / 2.0,
        fit_quality=quality,
        quality_defined=defined,
        window=(t0, t1),
        n_modes=n_modes,
        caveat=_CAVEAT % n_modes,
    )


# ---------------------------------------------------------------------------
# characteristic-mode initial data


def characteristic_initial(
    params: ModelParams, spectrum: Spectrum, n_modes: int
) -> InitialData:
    """Initial data following each mode's slowest-decaying characteristic root.

    Per mode the rightmost root s of the characteristic function is located
    and the state is set on the corresponding solution u = Re(U e^(s t)),
    scaled by U = 1/mu so high modes do not dominate. The history callable
    continues the same solution into t < 0. Along such data the energy of
    each mode decays like e^(2 Re(s) t) up to oscillation, which makes this
    the natural probe for decay-rate studies: generic data can push energy
    through the delayed trace transiently even when every root is stable.
    """
    from .resolvent import spectral_abscissa_estimate

    if n_modes < 1:
        raise ValidationError("n_modes must be at least 1")
    k = params.kind
    al, be, tau = params.alpha, params.beta, params.tau
    amps = []
    for n in range(1, n_modes + 1):
        mu = spectrum.mu(n)
        _, diag = spectral_abscissa_estimate(params, mu, with_diagnostics=True)
        s = complex(diag["root"][0], diag["root"][1])
        big_u = 1.0 / mu
        if k is SystemKind.DELAY_HYPERBOLIC:
            c_th = -(mu**be) * s * big_u / (s + mu**al)
        elif k is SystemKind.DELAY_PARABOLIC:
            c_th = (
                -(mu**be)
                * s
                * big_u
                / (s + params.a * mu**al + params.kappa * mu**al * cmath.exp(-s * tau))
            )
        elif k is SystemKind.DELAYED_DAMPING_STRING:
            c_th = -math.sqrt(mu) * s * big_u / (s + mu)
        else:
            c_th = -(mu**be) * s * big_u / (s + mu**al)
        amps.append((big_u, s, c_th))

    u0 = np.array([u for u, _, _ in amps], dtype=float)
    v0 = np.array([(s * u).real for u, s, _ in amps])
    th0 = np.array([c.real for _, _, c in amps])

    slot = _delayed_slot(params)
    if slot is None:
        return InitialData(u0, v0, th0)

    roots = np.array([s for _, s, _ in amps])
    if slot == "u":
        coef = np.array([u for u, _, _ in amps], dtype=complex)
    elif slot == "v":
        coef = np.array([s * u for u, s, _ in amps])
    else:
        coef = np.array([c for _, _, c in amps])

    def history(t: float) -> np.ndarray:
        return np.real(coef * np.exp(roots * t))

    return InitialData(u0, v0, th0, history=history)
