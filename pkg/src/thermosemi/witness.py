"""Witness families certifying failure of immediate norm-continuity.

Each witness is an explicit pair (F_n, U_n) with (i*lam_n - A)U_n = F_n,
unit forcing norm, frequencies lam_n = mu_n^q tending to infinity, and
state norms bounded away from zero. Their existence shows the resolvent
norm does not vanish along the imaginary axis, which rules out immediate
norm-continuity (hence differentiability and analyticity) of the semigroup.

The constructions anchor one component at an explicit power of mu, solve the
remaining algebraic rows exactly, and load the leftover of one row onto the
transport forcing h. Both h and the history profile z stay inside the
two-term exponential family, so every residual is evaluated analytically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import ModelParams, ModeVector, Spectrum, SystemKind, mode_energy2
from .errors import (
    OverflowRangeError,
    UnsupportedCaseError,
    ValidationError,
)
from .profiles import ExponentialSum
from .resolvent import ModeForcing, forcing_norm2, mode_residual
from ._parallel import thread_map

_TOL = 1e-12

#: the property the sweep certifies, named for report output
CERTIFICATE = "resolvent-norm-nonvanishing-on-imaginary-axis"


@dataclass(frozen=True)
class ExponentChoice:
    """Exponents of one witness family: lam = mu^q, anchor size mu^(-p).

    ``delta`` is the free auxiliary exponent where the case has one (zero
    otherwise) and ``case`` names the construction branch.
    """

    p: float
    q: float
    delta: float
    case: str


def select_exponents(
    params: ModelParams, delta: Optional[float] = None
) -> ExponentChoice:
    """Pick the witness exponents for the given parameter point.

    Hyperbolic kind:

    * ``hyp-alpha-positive`` (alpha > 0): p = 1/2 - beta + alpha, q = alpha.
    * ``hyp-alpha-zero``: p = 1/2 - beta + delta, q = delta, with free
      delta in (0, 1/2), default 1/4.

    Parabolic kind:

    * ``par-equality`` (beta = alpha/2 + 1/2): p = q = 1/2. The thermal
      component cancels identically and the forcing coefficient is -1.
    * ``par-resonant`` (alpha > 0, beta > alpha/2, off the equality line):
      p = beta - alpha/2, q = 1/2. Driving at the elastic frequency
      lam = sqrt(mu) annihilates the thermal component to leading order, so
      the history trace vanishes and the ratio converges to tau/sqrt(3)
      monotonically at rate mu^(-2p).
    * ``par-small-q`` (alpha > 0, beta <= alpha/2): p = alpha/2 - beta + 1
      - delta, q = delta, with free delta below min(alpha, 1/2, (1+alpha)/3,
      1 + alpha - 2*beta); default is half that bound capped at 1/4. Here
      the history trace stays order one, so the ratio oscillates with n;
      the family still bounds the resolvent norm away from zero.
    * ``par-alpha-zero`` (alpha = 0, beta < 1/2): p = 1 - beta, q = delta,
      free delta in (0, 1/2), default 1/4.

    The corner alpha = 0, beta = 1/2 has no construction in this family and
    raises UnsupportedCaseError. Points outside the square
    Q = {2*beta - alpha <= 1} are rejected: the certificate is only claimed
    there. Passing ``delta`` to a case with fixed exponents is an error.
    """
    be, al = params.beta, params.alpha
    if 2 * be - al > 1 + _TOL:
        raise ValidationError(
            "(beta, alpha)=(%g, %g) outside the square 2*beta - alpha <= 1" % (be, al)
        )
    kind = params.kind
    if kind is SystemKind.DELAY_HYPERBOLIC:
        if al > _TOL:
            _reject_delta(delta, "hyp-alpha-positive")
            return ExponentChoice(0.5 - be + al, al, 0.0, "hyp-alpha-positive")
        d = _pick_delta(delta, 0.5)
        return ExponentChoice(0.5 - be + d, d, d, "hyp-alpha-zero")
    if kind is SystemKind.DELAY_PARABOLIC:
        if al <= _TOL and abs(be - 0.5) <= _TOL:
            raise UnsupportedCaseError(
                "no witness family at alpha=0, beta=1/2; perturb the exponents"
            )
        eq = al / 2 + 0.5 - be
        if abs(eq) <= _TOL:
            _reject_delta(delta, "par-equality")
            return ExponentChoice(0.5, 0.5, 0.0, "par-equality")
        if al > _TOL and be - al / 2 > _TOL:
            _reject_delta(delta, "par-resonant")
            return ExponentChoice(be - al / 2, 0.5, 0.0, "par-resonant")
        if al > _TOL:
            bound = min(al, 0.5, (1 + al) / 3, 1 + al - 2 * be)
            d = _pick_delta(delta, bound)
            return ExponentChoice(al / 2 - be + 1 - d, d, d, "par-small-q")
        if be >= 0.5 - _TOL:
            # alpha = 0 with beta > 1/2 is outside Q, caught above; equality
            # of beta with 1/2 was the unsupported corner
            raise UnsupportedCaseError(
                "no witness family at alpha=0, beta=%g" % be
            )
        d = _pick_delta(delta, 0.5)
        return ExponentChoice(1 - be, d, d, "par-alpha-zero")
    raise ValidationError(
        "witness constructions cover the delayed hyperbolic and parabolic kinds; got %s"
        % kind
    )


def _pick_delta(delta: Optional[float], bound: float) -> float:
    if bound <= 0:
        raise ValidationError("no admissible auxiliary exponent at this point")
    if delta is None:
        return min(bound / 2, 0.25)
    d = float(delta)
    if not 0 < d < bound:
        raise ValidationError(
            "delta=%g outside the admissible range (0, %g)" % (d, bound)
        )
    return d


def _reject_delta(delta, case):
    if delta is not None:
        raise ValidationError("case %s has fixed exponents; delta is not free" % case)


@dataclass(frozen=True)
class WitnessRow:
    """One witness pair, with the numbers a certificate needs.

    Norms are those of the raw construction; the stored state and forcing
    are rescaled so the forcing has unit norm, and ``residual`` is measured
    on the rescaled pair (so it is already relative).
    """

    n: int
    mu: float
    lam: float
    exponents: ExponentChoice
    phi: complex
    norm_u: float
    norm_f: float
    ratio: float
    residual: float


@dataclass(frozen=True)
class WitnessMode:
    lam: float
    forcing: ModeForcing
    state: ModeVector
    row: WitnessRow


def build_witness_mode(
    params: ModelParams, mu: float, n: int = 0, delta: Optional[float] = None
) -> WitnessMode:
    """Construct the witness pair at one eigenvalue.

    The anchor component has magnitude mu^(-p) (theta for the hyperbolic
    kind, v for the parabolic one); the two algebraic rows that can be
    solved exactly are, and the remaining row defines the forcing
    coefficient phi carried by the transport slot. The returned forcing has
    unit norm and the state is scaled identically, so row.ratio equals both
    norm_u/norm_f and the norm of the returned state.
    """
    if mu <= 0:
        raise ValidationError("mu must be positive")
    if mu > 1e13:
        raise OverflowRangeError(
            "mu=%g too large for direct power-law evaluation; rescale or work in logs"
            % mu
        )
    exps = select_exponents(params, delta)
    a, be, al, tau, xi = params.a, params.beta, params.alpha, params.tau, params.xi
    lam = mu**exps.q
    il = 1j * lam
    E = cmath.exp(-il * tau)

    if params.kind is SystemKind.DELAY_HYPERBOLIC:
        theta = -(mu**-exps.p)
        v = (il + mu**al) * mu ** (-be - exps.p)
        u = v / il
        rmu = math.sqrt(mu)
        phi = -(rmu * u * E + il * v / rmu + a * rmu * v - mu ** (be - 0.5) * theta)
        trace = rmu * u
        z = ExponentialSum.exponential_form(trace, phi, lam * tau)
        h = ExponentialSum.exponential_form(phi * cmath.exp(il * tau) / tau, 0.0, lam * tau)
    else:
        kap = params.kappa
        v = mu**-exps.p
        u = v / il
        theta = (il * v + mu * u) * mu**-be
        phi = -(
            il * mu ** (-al / 2) * theta
            + (a + kap * E) * mu ** (al / 2) * theta
            + mu ** (be - al / 2) * v
        )
        trace = mu ** (al / 2) * theta
        z = ExponentialSum.exponential_form(trace, phi / kap, lam * tau)
        h = ExponentialSum.exponential_form(
            phi * cmath.exp(il * tau) / (kap * tau), 0.0, lam * tau
        )

    state = ModeVector(u, v, theta, z)
    forcing = ModeForcing(h=h)
    norm_u = math.sqrt(mode_energy2(params, mu, state))
    norm_f = math.sqrt(forcing_norm2(params, mu, forcing))
    if norm_f == 0:
        raise ValidationError("degenerate witness: zero forcing")
    scale = 1.0 / norm_f
    state_n = state.scaled(scale)
    forcing_n = forcing.scaled(scale)
    residual = mode_residual(params, mu, lam, state_n, forcing_n)
    row = WitnessRow(
        n=n,
        mu=float(mu),
        lam=float(lam),
        exponents=exps,
        phi=complex(phi),
        norm_u=norm_u,
        norm_f=norm_f,
        ratio=norm_u / norm_f,
        residual=residual,
    )
    return WitnessMode(float(lam), forcing_n, state_n, row)


def richardson_extrapolate(ns: Sequence[int], ratios: Sequence[float]) -> float:
    """Extrapolate the ratio sequence to n = infinity.

    Fits the polynomial in 1/n through the last three points and evaluates
    it at zero (plain Richardson extrapolation on a geometric index ladder).
    With two points the fit is linear; with one, the value itself. Degenerate
    abscissas fall back to the last ratio.
    """
    if len(ns) != len(ratios) or not ns:
        raise ValidationError("need matching nonempty index and ratio sequences")
    take = min(3, len(ns))
    hs = [1.0 / float(n) for n in ns[-take:]]
    rs = [float(r) for r in ratios[-take:]]
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            if abs(hs[i] - hs[j]) < 1e-15:
                return rs[-1]
    total = 0.0
    for i, (hi, ri) in enumerate(zip(hs, rs)):
        weight = 1.0
        for j, hj in enumerate(hs):
            if j != i:
                weight *= hj / (hj - hi)
        total += ri * weight
    return total


@dataclass(frozen=True)
class SweepResult:
    """Witness family over a ladder of modes, with the extrapolated limit."""

    rows: list
    limit_estimate: float
    certified: bool
    criterion: str
    conclusion: str


def witness_sweep(
    params: ModelParams,
    spectrum: Spectrum,
    indices: Sequence[int],
    delta: Optional[float] = None,
) -> SweepResult:
    """Build witnesses along a mode ladder and extrapolate the ratio limit.

    ``certified`` requires every row residual below 1e-9 (the forcing is
    unit-norm, so that is a relative bound) and a positive extrapolated
    limit. The conclusion sentence states what such a family proves.
    """
    idx = [int(n) for n in indices]
    if not idx:
        raise ValidationError("need at least one mode index")
    if any(n < 1 for n in idx):
        raise ValidationError("mode indices must be >= 1")
    if any(y <= x for x, y in zip(idx, idx[1:])):
        raise ValidationError("mode indices must be strictly increasing")

    if params.kind is SystemKind.DELAYED_DAMPING_STRING:
        rows = thread_map(
            lambda n: string_witness(n, a=params.a, tau=params.tau, xi=params.xi).row,
            idx,
        )
    else:
        rows = thread_map(
            lambda n: build_witness_mode(params, spectrum.mu(n), n=n, delta=delta).row,
            idx,
        )
    limit = richardson_extrapolate(idx, [r.ratio for r in rows])
    certified = limit > 0 and all(r.residual <= 1e-9 for r in rows)
    conclusion = (
        "lim inf over lambda -> infinity of the resolvent norm on the imaginary "
        "axis >= %.6g > 0; the semigroup is not immediately norm-continuous, "
        "hence not immediately differentiable and not analytic." % limit
        if certified
        else "certificate incomplete: residuals or the extrapolated limit "
        "failed the thresholds"
    )
    return SweepResult(list(rows), float(limit), certified, CERTIFICATE, conclusion)


@dataclass(frozen=True)
class StringWitness:
    """Witness pair for the delayed-stiffness string realization at mode n."""

    row: WitnessRow
    state: ModeVector
    forcing: ModeForcing
    antiderivative_coefficient: complex


def string_witness(
    n: int, a: float = 1.0, tau: float = 1.0, xi: Optional[float] = None
) -> StringWitness:
    """Concrete witness on the interval (0, pi) at the n-th sine mode.

    The displacement and velocity ride on sin(n x), the thermal component on
    cos(n x), and the mode coefficients are

        u = (1 - i)/n^3,  v = (1 + i)/n,  theta = -1/n^2,  lam = n^2.

    The forcing coefficient equals the cosine coefficient of the
    antiderivative expression i*lam*(integral of v from pi/2 to x)
    - a*v_x + theta - u_x*e^(-i*lam*tau); the lower limit pi/2 kills the
    integration constant only when cos(n*pi/2) = 0, so even n is rejected.
    With the delay acting on the stiffness term and the instantaneous
    damping on it as well, this is the realization, at exponent pair
    (1/2, 1) and mu = n^2, of the abstract hyperbolic witness; the L2 norms
    on (0, pi) carry the factor pi/2 per component. The default history
    weight is the smallest admissible one, 2*tau/a.
    """
    if n < 1:
        raise ValidationError("mode index must be >= 1")
    if n % 2 == 0:
        raise UnsupportedCaseError(
            "even mode index: cos(n*pi/2) != 0 leaves a constant in the antiderivative"
        )
    if a <= 0 or tau <= 0:
        raise ValidationError("a and tau must be positive")
    if xi is None:
        xi = 2.0 * tau / a
    if xi <= 0:
        raise ValidationError("xi must be positive")

    mu = float(n) ** 2
    lam = mu
    il = 1j * lam
    E = cmath.exp(-il * tau)
    fn = float(n)
    uc = (1 - 1j) / fn**3
    vc = (1 + 1j) / fn
    thetac = -1.0 / fn**2
    phi = -il * vc / fn - a * fn * vc + thetac - fn * uc * E

    z = ExponentialSum.exponential_form(fn * uc, phi, lam * tau)
    h = ExponentialSum.exponential_form(phi * cmath.exp(il * tau) / tau, 0.0, lam * tau)
    half = math.pi / 2

    # energy norms on (0, pi): each modal component integrates to pi/2
    norm_u2 = half * (mu * abs(uc) ** 2 + abs(vc) ** 2 + abs(thetac) ** 2 + xi * z.l2_norm2())
    norm_f2 = half * xi * h.l2_norm2()
    norm_u, norm_f = math.sqrt(norm_u2), math.sqrt(norm_f2)

    scale = 1.0 / norm_f
    state = ModeVector(uc, vc, thetac, z).scaled(scale)
    forcing = ModeForcing(h=h).scaled(scale)
    residual = _string_stiffness_residual(state, forcing, mu, lam, a, tau, xi) * math.sqrt(half)
    exps = ExponentChoice(p=1.0, q=1.0, delta=0.0, case="string-odd")
    row = WitnessRow(
        n=n,
        mu=mu,
        lam=float(lam),
        exponents=exps,
        phi=complex(phi),
        norm_u=norm_u,
        norm_f=norm_f,
        ratio=norm_u / norm_f,
        residual=residual,
    )
    return StringWitness(row, state, forcing, complex(phi))


def _string_stiffness_residual(state, forcing, mu, lam, a, tau, xi) -> float:
    """Residual of the delayed-stiffness rows (delay on the elastic term).

    This realization differs from the delayed-damping string evolved by the
    dynamics module: here z transports sqrt(mu)*u and the v-row reads
    i*lam*v + sqrt(mu)*z(1) + a*mu*v - sqrt(mu)*theta = f2. It coincides
    with the abstract hyperbolic mode rows at (beta, alpha) = (1/2, 1).
    """
    il = 1j * lam
    rmu = math.sqrt(mu)
    u, v, th, z = state.u, state.v, state.theta, state.z
    r1 = il * u - v
    r2 = il * v + rmu * z.value_at_1() + a * mu * v - rmu * th
    r3 = il * th + mu * th + rmu * v
    res = z.scaled(il) + z.derivative().scaled(1.0 / tau) - forcing.h
    rz2 = res.l2_norm2()
    return math.sqrt(mu * abs(r1) ** 2 + abs(r2) ** 2 + abs(r3) ** 2 + xi * rz2)
