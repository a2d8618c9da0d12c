"""Per-mode resolvent solves, norm lower bounds, and characteristic roots.

On the n-th eigenspace the resolvent equation (i*lam - A)U = F reduces to a
small linear system in (u, theta) after eliminating v and the transported
history. The determinant of that system factors through the characteristic
function of the mode, which is also what the root finder for decay rates
works with.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import ModelParams, ModeVector, Spectrum, SystemKind, mode_energy2, mode_inner
from .errors import (
    NearSingularError,
    OverflowRangeError,
    RootNotFoundError,
    ValidationError,
)
from .profiles import (
    ExponentialSum,
    GridSamples,
    transport_endpoint,
    transport_solve,
)
from ._parallel import thread_map

_SING_TOL = 1e-12


@dataclass(frozen=True)
class ModeForcing:
    """Right-hand side of one mode equation: scalars and a transport source."""

    f1: complex = 0.0
    f2: complex = 0.0
    f3: complex = 0.0
    h: object = None

    def scaled(self, s) -> "ModeForcing":
        return ModeForcing(
            self.f1 * s,
            self.f2 * s,
            self.f3 * s,
            None if self.h is None else self.h.scaled(s),
        )


def forcing_norm2(params: ModelParams, mu: float, forcing: ModeForcing) -> float:
    """Squared norm mu*|f1|^2 + |f2|^2 + |f3|^2 + xi*int |h|^2.

    The first slot is weighted by mu because forcing data there lives in the
    domain of the square root of the driving operator.
    """
    total = (
        mu * abs(forcing.f1) ** 2 + abs(forcing.f2) ** 2 + abs(forcing.f3) ** 2
    )
    if params.has_delay and forcing.h is not None:
        total += params.xi * forcing.h.l2_norm2()
    return float(total)


def forcing_inner(params: ModelParams, mu: float, x: ModeForcing, y: ModeForcing) -> complex:
    total = (
        mu * x.f1 * complex(y.f1).conjugate()
        + x.f2 * complex(y.f2).conjugate()
        + x.f3 * complex(y.f3).conjugate()
    )
    if params.has_delay and x.h is not None and y.h is not None:
        total += params.xi * x.h.l2_inner(y.h)
    return complex(total)


def _det_scale(params: ModelParams, mu: float, lam: float) -> float:
    """Magnitude scale of the reduced 2x2 determinant, for the singularity test."""
    k, a = params.kind, params.a
    al, be = params.alpha, params.beta
    lam = abs(lam)
    if k is SystemKind.DELAY_HYPERBOLIC:
        return mu * (1 + a * lam) * (1 + lam + mu**al) + lam * mu ** (2 * be)
    if k is SystemKind.DELAY_PARABOLIC:
        return (mu + lam**2) * (1 + lam + (a + params.kappa) * mu**al) + lam * mu ** (
            2 * be
        )
    if k is SystemKind.NO_DELAY_BASELINE:
        return (mu + lam**2) * (1 + lam + mu**al) + lam * mu ** (2 * be)
    if k is SystemKind.DELAYED_DAMPING_STRING:
        return mu * (1 + a * lam) * (1 + lam + mu) + lam * mu
    raise ValidationError("unknown kind %s" % k)


def solve_mode_resolvent(
    params: ModelParams, mu: float, lam: float, forcing: ModeForcing
) -> ModeVector:
    """Solve (i*lam - A_mode) U = F on one eigenspace.

    Eliminates v = i*lam*u - f1 and the history profile (whose endpoint value
    splits into a transported trace plus a forcing integral), solves the
    remaining 2x2 system in (u, theta), then reconstructs the profile by
    variation of constants so the transport row holds exactly for analytic
    forcing profiles. Raises NearSingularError when the reduced determinant
    is below 1e-12 times its magnitude scale.
    """
    if mu <= 0:
        raise ValidationError("mu must be positive")
    if not math.isfinite(lam):
        raise ValidationError("lam must be finite")
    k = params.kind
    a, al, be, tau = params.a, params.alpha, params.beta, params.tau
    il = 1j * lam
    f1, f2, f3 = complex(forcing.f1), complex(forcing.f2), complex(forcing.f3)
    h = forcing.h

    if k is SystemKind.NO_DELAY_BASELINE:
        m11 = mu - lam**2
        m12 = -(mu**be)
        m21 = il * mu**be
        m22 = il + mu**al
        r1 = f2 + il * f1
        r2 = f3 + mu**be * f1
        u, theta = _solve2(params, mu, lam, m11, m12, m21, m22, r1, r2)
        return ModeVector(u, il * u - f1, theta, None)

    E = cmath.exp(-il * tau)
    tend = transport_endpoint(h, lam, tau)

    if k is SystemKind.DELAY_HYPERBOLIC:
        # v-row: i*lam*v + sqrt(mu)*z(1) + a*mu*v - mu^beta*theta = f2,
        # z(1) = sqrt(mu)*u*E + tend
        m11 = -(lam**2) + il * a * mu + mu * E
        m12 = -(mu**be)
        m21 = il * mu**be
        m22 = il + mu**al
        r1 = f2 + (il + a * mu) * f1 - math.sqrt(mu) * tend
        r2 = f3 + mu**be * f1
        u, theta = _solve2(params, mu, lam, m11, m12, m21, m22, r1, r2)
        v = il * u - f1
        z = transport_solve(math.sqrt(mu) * u, lam, tau, h)
        return ModeVector(u, v, theta, z)

    if k is SystemKind.DELAY_PARABOLIC:
        # theta-row: i*lam*theta + a*mu^alpha*theta + kappa*mu^(alpha/2)*z(1)
        #            + mu^beta*v = f3, z(1) = mu^(alpha/2)*theta*E + tend
        kap = params.kappa
        m11 = mu - lam**2
        m12 = -(mu**be)
        m21 = il * mu**be
        m22 = il + a * mu**al + kap * mu**al * E
        r1 = f2 + il * f1
        r2 = f3 + mu**be * f1 - kap * mu ** (al / 2) * tend
        u, theta = _solve2(params, mu, lam, m11, m12, m21, m22, r1, r2)
        v = il * u - f1
        z = transport_solve(mu ** (al / 2) * theta, lam, tau, h)
        return ModeVector(u, v, theta, z)

    if k is SystemKind.DELAYED_DAMPING_STRING:
        # v-row: i*lam*v + mu*u + a*sqrt(mu)*z(1) - sqrt(mu)*theta = f2,
        # z(1) = sqrt(mu)*v*E + tend, v = i*lam*u - f1
        rmu = math.sqrt(mu)
        m11 = -(lam**2) + mu + il * a * mu * E
        m12 = -rmu
        m21 = il * rmu
        m22 = il + mu
        r1 = f2 + (il + a * mu * E) * f1 - a * rmu * tend
        r2 = f3 + rmu * f1
        u, theta = _solve2(params, mu, lam, m11, m12, m21, m22, r1, r2)
        v = il * u - f1
        z = transport_solve(rmu * v, lam, tau, h)
        return ModeVector(u, v, theta, z)

    raise ValidationError("unknown kind %s" % k)


def _solve2(params, mu, lam, m11, m12, m21, m22, r1, r2):
    det = m11 * m22 - m12 * m21
    scale = _det_scale(params, mu, lam)
    if abs(det) < _SING_TOL * scale:
        raise NearSingularError(
            "mode system nearly singular at mu=%g, lam=%g (|det|=%.3e, scale=%.3e)"
            % (mu, lam, abs(det), scale),
            det=det,
            scale=scale,
        )
    u = (r1 * m22 - m12 * r2) / det
    theta = (m11 * r2 - m21 * r1) / det
    return u, theta


def mode_residual(
    params: ModelParams, mu: float, lam: float, state: ModeVector, forcing: ModeForcing
) -> float:
    """Energy norm of (i*lam - A_mode)U - F.

    The three scalar rows are evaluated exactly. The transport row is
    evaluated analytically for exponential-sum profiles; for sampled profiles
    it is tested in per-cell integrated form against the product-trapezoid
    quadrature, which is the discrete sense in which sampled solutions hold.
    """
    k = params.kind
    a, al, be, tau = params.a, params.alpha, params.beta, params.tau
    il = 1j * lam
    u, v, th = complex(state.u), complex(state.v), complex(state.theta)
    f1, f2, f3 = complex(forcing.f1), complex(forcing.f2), complex(forcing.f3)

    r1 = il * u - v - f1
    if k is SystemKind.NO_DELAY_BASELINE:
        r2 = il * v + mu * u - mu**be * th - f2
        r3 = il * th + mu**al * th + mu**be * v - f3
        return math.sqrt(mu * abs(r1) ** 2 + abs(r2) ** 2 + abs(r3) ** 2)

    z1 = state.z.value_at_1()
    if k is SystemKind.DELAY_HYPERBOLIC:
        r2 = il * v + math.sqrt(mu) * z1 + a * mu * v - mu**be * th - f2
        r3 = il * th + mu**al * th + mu**be * v - f3
    elif k is SystemKind.DELAY_PARABOLIC:
        r2 = il * v + mu * u - mu**be * th - f2
        r3 = (
            il * th
            + params.a * mu**al * th
            + params.kappa * mu ** (al / 2) * z1
            + mu**be * v
            - f3
        )
    elif k is SystemKind.DELAYED_DAMPING_STRING:
        rmu = math.sqrt(mu)
        r2 = il * v + mu * u + a * rmu * z1 - rmu * th - f2
        r3 = il * th + mu * th + rmu * v - f3
    else:
        raise ValidationError("unknown kind %s" % k)

    rz2 = _transport_residual2(state.z, lam, tau, forcing.h)
    return math.sqrt(
        mu * abs(r1) ** 2 + abs(r2) ** 2 + abs(r3) ** 2 + params.xi * rz2
    )


def _transport_residual2(z, lam: float, tau: float, h) -> float:
    if isinstance(z, ExponentialSum) and (h is None or isinstance(h, ExponentialSum)):
        res = z.scaled(1j * lam) + z.derivative().scaled(1.0 / tau)
        if h is not None:
            res = res - h
        return res.l2_norm2()
    # sampled case: compare the cell-integrated update relation
    n = z.values.size if isinstance(z, GridSamples) else 1025
    zg = z if isinstance(z, GridSamples) else z.sample(n)
    ref = transport_solve(zg.value_at_0(), lam, tau, h)
    refg = ref if isinstance(ref, GridSamples) else ref.sample(n)
    if refg.values.size != n:
        refg = GridSamples(np.interp(np.linspace(0, 1, n), refg.grid, refg.values.real)
                           + 1j * np.interp(np.linspace(0, 1, n), refg.grid, refg.values.imag))
    diff = zg.values - refg.values
    dx = 1.0 / (n - 1)
    # defect per unit length of the integrated transport relation
    return float(np.trapezoid(np.abs(diff) ** 2, dx=dx)) * (lam**2 + 1.0 / tau**2)


# ---------------------------------------------------------------------------
# resolvent norm lower bounds


def mode_resolvent_norm_lb(
    params: ModelParams, mu: float, lam: float, k_trial: int = 4
) -> float:
    """Rayleigh lower bound for the norm of the mode resolvent at i*lam.

    Solves the mode equation on a trial family of forcings: the three scalar
    slots, Fourier transport profiles e^(2*pi*i*k*rho) for |k| <= k_trial,
    and the two delay-tuned profiles e^(+-i*lam*tau*rho). The bound is the
    largest singular value of the resolvent restricted to that family,
    computed from the two Gram matrices in the energy inner products. It
    never exceeds the true norm and grows monotonically with k_trial.

    The baseline kind has no transport slot, so its trial family is the three
    scalar slots and the bound there is the exact norm of the 3x3 resolvent.
    """
    if k_trial < 0:
        raise ValidationError("k_trial must be nonnegative")
    forcings = [
        ModeForcing(f1=1.0),
        ModeForcing(f2=1.0),
        ModeForcing(f3=1.0),
    ]
    if params.has_delay:
        freqs = [2 * math.pi * k for k in range(-k_trial, k_trial + 1)]
        freqs += [lam * params.tau, -lam * params.tau]
        for w in freqs:
            forcings.append(ModeForcing(h=ExponentialSum.from_terms([(1.0, 0, w)])))
    states = [solve_mode_resolvent(params, mu, lam, f) for f in forcings]
    m = len(forcings)
    gf = np.zeros((m, m), dtype=complex)
    gu = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(i, m):
            gf[i, j] = forcing_inner(params, mu, forcings[j], forcings[i])
            gu[i, j] = mode_inner(params, mu, states[j], states[i])
            gf[j, i] = gf[i, j].conjugate()
            gu[j, i] = gu[i, j].conjugate()
    # whiten the forcing Gram, dropping directions that are numerically
    # dependent (the delay-tuned profiles can coincide with Fourier ones)
    w, vec = np.linalg.eigh(gf)
    keep = w > 1e-12 * max(w.max(), 1e-300)
    if not keep.any():
        raise ValidationError("trial family degenerate")
    white = vec[:, keep] / np.sqrt(w[keep])
    mat = white.conj().T @ gu @ white
    evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
    return float(math.sqrt(max(float(evals[-1]), 0.0)))


@dataclass(frozen=True)
class ScanRow:
    """Result of maximizing the per-mode bound over modes at one frequency."""

    lam: float
    sup_lb: float
    argmax_n: int
    skipped_modes: tuple


def resolvent_scan(
    params: ModelParams,
    spectrum: Spectrum,
    lambdas: Sequence[float],
    n_max: int,
    k_trial: int = 2,
) -> list:
    """Lower-bound the resolvent norm on the imaginary axis, frequency by frequency.

    For each lam the bound is the maximum of mode_resolvent_norm_lb over
    modes n = 1..n_max. Modes where the solve is near-singular are skipped
    and reported in the row rather than silently dropped.
    """
    lam_list = [float(x) for x in lambdas]
    if not lam_list:
        raise ValidationError("need at least one frequency")
    if any(x <= 0 for x in lam_list):
        raise ValidationError("frequencies must be positive")
    if any(y <= x for x, y in zip(lam_list, lam_list[1:])):
        raise ValidationError("frequencies must be strictly increasing")
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")

    mus = [spectrum.mu(n) for n in range(1, n_max + 1)]

    def one(lam: float) -> ScanRow:
        best = -1.0
        best_n = 0
        skipped = []
        for n, mu in enumerate(mus, start=1):
            try:
                val = mode_resolvent_norm_lb(params, mu, lam, k_trial)
            except NearSingularError:
                skipped.append(n)
                continue
            if val > best:
                best, best_n = val, n
        if best_n == 0:
            raise NearSingularError(
                "every mode was near-singular at lam=%g" % lam
            )
        return ScanRow(lam, best, best_n, tuple(skipped))

    return thread_map(one, lam_list)


# ---------------------------------------------------------------------------
# characteristic functions and root finding


@dataclass(frozen=True)
class CharacteristicQuery:
    """A point s in the complex plane paired with the mode eigenvalue mu."""

    mu: float
    s: complex


def characteristic_value(params: ModelParams, query: CharacteristicQuery) -> complex:
    """Characteristic function of one mode at s.

    Zeros of this function are the mode's spectrum as a delay system. The
    hyperbolic, baseline, and string kinds carry a rational term whose pole
    (s = -mu^alpha, or s = -mu for the string) is outside the function's
    domain; evaluating there raises ValidationError.
    """
    mu, s = float(query.mu), complex(query.s)
    if mu <= 0:
        raise ValidationError("mu must be positive")
    k = params.kind
    a, al, be, tau = params.a, params.alpha, params.beta, params.tau
    if params.has_delay and -s.real * tau > 650.0:
        # the delayed term alone exceeds float range; no root lives out here
        raise OverflowRangeError(
            "characteristic function overflows for Re s < %g" % (-650.0 / tau)
        )
    if k is SystemKind.DELAY_HYPERBOLIC:
        denom = s + mu**al
        if denom == 0:
            raise ValidationError("pole of the characteristic function at s=%s" % s)
        return s * s + a * mu * s + mu * cmath.exp(-s * tau) + mu ** (2 * be) * s / denom
    if k is SystemKind.DELAY_PARABOLIC:
        kap = params.kappa
        return (s * s + mu) * (
            s + a * mu**al + kap * mu**al * cmath.exp(-s * tau)
        ) + mu ** (2 * be) * s
    if k is SystemKind.NO_DELAY_BASELINE:
        denom = s + mu**al
        if denom == 0:
            raise ValidationError("pole of the characteristic function at s=%s" % s)
        return s * s + mu + mu ** (2 * be) * s / denom
    if k is SystemKind.DELAYED_DAMPING_STRING:
        denom = s + mu
        if denom == 0:
            raise ValidationError("pole of the characteristic function at s=%s" % s)
        return s * s + mu + a * mu * s * cmath.exp(-s * tau) + mu * s / denom
    raise ValidationError("unknown kind %s" % k)


def _characteristic_derivative(params: ModelParams, mu: float, s: complex) -> complex:
    k = params.kind
    a, al, be, tau = params.a, params.alpha, params.beta, params.tau
    if k is SystemKind.DELAY_HYPERBOLIC:
        denom = s + mu**al
        return (
            2 * s
            + a * mu
            - tau * mu * cmath.exp(-s * tau)
            + mu ** (2 * be) * (denom - s) / (denom * denom)
        )
    if k is SystemKind.DELAY_PARABOLIC:
        kap = params.kappa
        ee = cmath.exp(-s * tau)
        return (
            2 * s * (s + a * mu**al + kap * mu**al * ee)
            + (s * s + mu) * (1 - tau * kap * mu**al * ee)
            + mu ** (2 * be)
        )
    if k is SystemKind.NO_DELAY_BASELINE:
        denom = s + mu**al
        return 2 * s + mu ** (2 * be) * (denom - s) / (denom * denom)
    if k is SystemKind.DELAYED_DAMPING_STRING:
        denom = s + mu
        ee = cmath.exp(-s * tau)
        return 2 * s + a * mu * ee * (1 - tau * s) + mu * (denom - s) / (denom * denom)
    raise ValidationError("unknown kind %s" % k)


def _char_scale(params: ModelParams, mu: float, s: complex) -> float:
    """Size scale of the characteristic function near s, for residual tests."""
    k = params.kind
    m = abs(s)
    a, al, be, tau = params.a, params.alpha, params.beta, params.tau
    grow = math.exp(min(50.0, -s.real * tau)) if params.has_delay else 1.0
    if k is SystemKind.DELAY_PARABOLIC:
        return (m * m + mu) * (m + (a + params.kappa) * mu**al * grow) + mu ** (
            2 * be
        ) * m + 1.0
    return m * m + (a if k is not SystemKind.NO_DELAY_BASELINE else 0.0) * mu * m * grow \
        + mu * grow + mu ** (2 * be) * (1 + m) + 1.0


def _winding_number(params, mu, re0, re1, im0, im1, pts) -> Optional[int]:
    """Winding of the characteristic function around a rectangle boundary.

    Returns None when the path runs too close to a zero for the count to be
    trusted at this sampling density.
    """
    top = np.linspace(re0 + 1j * im0, re1 + 1j * im0, pts)
    right = np.linspace(re1 + 1j * im0, re1 + 1j * im1, pts)
    back = np.linspace(re1 + 1j * im1, re0 + 1j * im1, pts)
    left = np.linspace(re0 + 1j * im1, re0 + 1j * im0, pts)
    path = np.concatenate([top[:-1], right[:-1], back[:-1], left])
    vals = np.array([characteristic_value(params, CharacteristicQuery(mu, s)) for s in path])
    mags = np.abs(vals)
    if np.any(mags == 0.0):
        return None
    angles = np.angle(vals)
    steps = np.diff(np.concatenate([angles, angles[:1]]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    # a near-pi jump means the sampling straddled a zero too closely
    if np.any(np.abs(steps) > 2.8):
        return None
    total = steps.sum()
    winding = round(total / (2 * math.pi))
    if abs(total - 2 * math.pi * winding) > 0.5:
        return None
    return int(winding)


def _count_zeros(params, mu, re0, re1, im0, im1, base_pts=64) -> Optional[int]:
    pts = base_pts
    prev = None
    while pts <= 1024:
        cur = _winding_number(params, mu, re0, re1, im0, im1, pts)
        if cur is not None and cur == prev:
            return cur
        prev = cur
        pts *= 2
    return None


def _newton_polish(params, mu, s0, tol=1e-12, max_iter=60) -> Optional[complex]:
    s = complex(s0)
    for _ in range(max_iter):
        try:
            val = characteristic_value(params, CharacteristicQuery(mu, s))
        except ValidationError:
            return None
        dval = _characteristic_derivative(params, mu, s)
        if dval == 0 or not cmath.isfinite(dval) or not cmath.isfinite(val):
            return None
        step = val / dval
        s -= step
        if abs(step) <= tol * max(1.0, abs(s)):
            return s
    return None


def _window_depth(params: ModelParams, mu: float, im_cap: float) -> float:
    """Depth R below which no characteristic root can sit.

    At a root the delayed term e^(-s*tau) must balance the polynomial part,
    so Re s >= -(1/tau) log(poly/coef); iterating that bound to its fixed
    point gives a depth that provably contains every root with imaginary
    part under im_cap. The baseline kind is a cubic whose real parts are
    bounded by the root sum.
    """
    k = params.kind
    a, al, be, tau = params.a, params.alpha, params.beta, params.tau
    if k is SystemKind.NO_DELAY_BASELINE:
        return mu**al + 2.0
    bulk = im_cap + 1.0
    r = 2.0
    for _ in range(80):
        m = r + bulk
        if k is SystemKind.DELAY_HYPERBOLIC:
            num = m * m + a * mu * m + mu ** (2 * be) + 1.0
            den = mu
        elif k is SystemKind.DELAY_PARABOLIC:
            # roots close to +-i*sqrt(mu) have tiny real part; elsewhere
            # |s^2+mu| >= 1 and the union bound below applies
            num = m + a * mu**al + mu ** (2 * be) * m + 1.0
            den = params.kappa * mu**al
        else:
            # roots with |s| < 1/2 satisfy |Re s| < 1/2 directly
            num = m * m + 2.0 * mu + mu * m + 1.0
            den = 0.5 * a * mu
        step = max(2.0, math.log(max(num / den, 1.0 + 1e-9)) / tau)
        if step <= r + 1e-9:
            r = max(r, step)
            break
        r = step
    return min(r + 1.0, 600.0 / tau)


def spectral_abscissa_estimate(
    params: ModelParams,
    mu: float,
    window: Optional[tuple] = None,
    refine_tol: float = 1e-12,
    with_diagnostics: bool = False,
):
    """Real part of the rightmost characteristic root of one mode.

    Counts zeros inside rectangles by the argument principle, subdivides the
    rectangle with the largest right edge first, and polishes candidates with
    Newton steps once a rectangle is small. A polished root is accepted only
    if the characteristic value there is tiny against the local scale, so the
    returned value is a best-effort estimate backed by an explicit residual
    check. Raises RootNotFoundError (with the scan record attached) when the
    search exhausts its budget.
    """
    if mu <= 0:
        raise ValidationError("mu must be positive")
    tau = params.tau if params.has_delay else 1.0
    im_hi = 2.0 * math.sqrt(mu) + 8.0 * math.pi / tau + 10.0
    im_lo = -1.0  # keep real roots safely inside; conjugates mirror the rest
    if window is None:
        window = (-_window_depth(params, mu, im_hi), 1.0)
    re_lo, re_hi = float(window[0]), float(window[1])
    if not re_lo < re_hi:
        raise ValidationError("window must satisfy lo < hi")

    record = []
    # queue of rectangles with their zero counts, rightmost edge first
    start = (re_lo, re_hi, im_lo, im_hi)
    count = _count_zeros(params, mu, *start)
    record.append({"rect": start, "count": count})
    if count is None:
        raise RootNotFoundError(
            "winding count unstable on the initial window",
            diagnostics={"window": list(window), "rectangles": record},
        )
    if count == 0:
        raise RootNotFoundError(
            "no characteristic roots inside the window",
            diagnostics={"window": list(window), "rectangles": record},
        )

    queue = [(start, count)]
    best = None
    budget = 400
    while queue and budget > 0:
        queue.sort(key=lambda item: item[0][1], reverse=True)
        (r0, r1, i0, i1), cnt = queue.pop(0)
        if best is not None and r1 <= best.real + refine_tol:
            continue
        budget -= 1
        if (r1 - r0) + (i1 - i0) < 1e-2 or cnt == 1 and (r1 - r0) < 0.05:
            seeds = [
                complex((r0 + r1) / 2, (i0 + i1) / 2),
                complex(r1, (i0 + i1) / 2),
                complex((r0 + r1) / 2, i1),
            ]
            found = False
            for seed in seeds:
                root = _newton_polish(params, mu, seed, tol=refine_tol)
                if root is None:
                    continue
                resid = abs(characteristic_value(params, CharacteristicQuery(mu, root)))
                ok = resid <= 1e-8 * _char_scale(params, mu, root)
                inside = (r0 - 0.5 <= root.real <= r1 + 0.5) and (
                    i0 - 0.5 <= root.imag <= i1 + 0.5
                )
                if ok and inside:
                    record.append({"root": [root.real, root.imag], "residual": resid})
                    if best is None or root.real > best.real:
                        best = root
                    found = True
                    break
            if found:
                continue
            if (r1 - r0) + (i1 - i0) < 1e-4:
                continue  # give up on this sliver
        # split along the longer side
        if (r1 - r0) >= (i1 - i0):
            mid = (r0 + r1) / 2
            parts = [(r0, mid, i0, i1), (mid, r1, i0, i1)]
        else:
            mid = (i0 + i1) / 2
            parts = [(r0, r1, i0, mid), (r0, r1, mid, i1)]
        for part in parts:
            c = _count_zeros(params, mu, *part)
            record.append({"rect": part, "count": c})
            if c is None:
                # nudge the split slightly and retry once
                eps = 1e-3 * (part[1] - part[0] + part[3] - part[2])
                part2 = (part[0] - eps, part[1] + eps, part[2] - eps, part[3] + eps)
                c = _count_zeros(params, mu, *part2)
                record.append({"rect": part2, "count": c})
                part = part2
            if c:
                queue.append((part, c))

    if best is None:
        raise RootNotFoundError(
            "root search budget exhausted without an accepted root",
            diagnostics={"window": list(window), "rectangles": record},
        )
    diag = {
        "window": [re_lo, re_hi],
        "imag_cap": im_hi,
        "rectangles": record,
        "root": [best.real, best.imag],
        "residual": abs(characteristic_value(params, CharacteristicQuery(mu, best))),
    }
    if with_diagnostics:
        return float(best.real), diag
    return float(best.real)
