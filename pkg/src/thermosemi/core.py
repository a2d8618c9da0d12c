"""Model parameters, spectra, mode states, and the (beta, alpha) region map.

The package works mode by mode: an abstract coupled system driven by a
positive operator with eigenvalues mu_1 <= mu_2 <= ... restricts, on each
eigenspace, to a small ODE system in the components (u, v, theta) plus a
transported history profile z on [0, 1]. Everything here is about those
per-mode objects and the exponent square [0, 1]^2 that indexes the coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import AdmissibilityError, ValidationError
from .profiles import profile_l2_norm2

_TOL = 1e-12


class SystemKind(Enum):
    """Which coupled system a parameter set describes."""

    DELAY_HYPERBOLIC = "delay-hyperbolic"
    DELAY_PARABOLIC = "delay-parabolic"
    NO_DELAY_BASELINE = "no-delay-baseline"
    DELAYED_DAMPING_STRING = "delayed-damping-string"

    @classmethod
    def parse(cls, text: str) -> "SystemKind":
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValidationError(
            "unknown system kind %r; expected one of %s"
            % (text, ", ".join(k.value for k in cls))
        )


# kinds whose evolution involves a delayed trace
_DELAYED = (
    SystemKind.DELAY_HYPERBOLIC,
    SystemKind.DELAY_PARABOLIC,
    SystemKind.DELAYED_DAMPING_STRING,
)


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of one system.

    beta, alpha  coupling/dissipation exponents, both in [0, 1]
    a            instantaneous damping coefficient (> 0 where the kind uses it)
    kappa        delayed damping coefficient (parabolic kind only)
    tau          delay length (> 0 for delayed kinds)
    xi           history weight in the energy norm (> 0 for delayed kinds)
    """

    kind: SystemKind
    beta: float = 0.5
    alpha: float = 0.5
    a: float = 1.0
    kappa: float = 1.0
    tau: float = 1.0
    xi: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kind, SystemKind):
            raise ValidationError("kind must be a SystemKind")
        for name in ("beta", "alpha"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val)):
                raise ValidationError("%s must be a finite number" % name)
            if val < -_TOL or val > 1.0 + _TOL:
                raise ValidationError("%s=%g outside [0, 1]" % (name, val))
        if self.kind is not SystemKind.NO_DELAY_BASELINE:
            if not (self.a > 0 and math.isfinite(self.a)):
                raise ValidationError("a must be positive")
            if not (self.tau > 0 and math.isfinite(self.tau)):
                raise ValidationError("tau must be positive")
            if not (self.xi > 0 and math.isfinite(self.xi)):
                raise ValidationError("xi must be positive")
        if self.kind is SystemKind.DELAY_PARABOLIC:
            if not (self.kappa > 0 and math.isfinite(self.kappa)):
                raise ValidationError("kappa must be positive")

    @property
    def has_delay(self) -> bool:
        return self.kind in _DELAYED

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class XiInterval:
    """Interval of history weights for which the energy form is dissipative."""

    lower: float
    upper: float
    lower_closed: bool
    upper_closed: bool

    def contains(self, x: float) -> bool:
        if x < self.lower or (x == self.lower and not self.lower_closed):
            return False
        if x > self.upper or (x == self.upper and not self.upper_closed):
            return False
        return True

    def describe(self) -> str:
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        hi = "inf" if math.isinf(self.upper) else "%g" % self.upper
        return "%s%g, %s%s" % (left, self.lower, hi, right)


def xi_admissible(params: ModelParams) -> XiInterval:
    """History-weight interval making the natural energy nonincreasing.

    For the hyperbolic kind (and the delayed-damping string, which shares its
    structure) the interval is [2*tau/a, inf), available only when a >= tau.
    For the parabolic kind it is the open interval
    (tau*(a - sqrt(a^2 - kappa^2)), tau*(a + sqrt(a^2 - kappa^2))),
    available only when a > kappa; this is exactly the range where the
    quadratic form in (theta, delayed theta) produced by differentiating the
    energy is negative semidefinite. The baseline has no history term, so any
    positive weight works.
    """
    k = params.kind
    if k is SystemKind.NO_DELAY_BASELINE:
        return XiInterval(0.0, math.inf, False, False)
    if k in (SystemKind.DELAY_HYPERBOLIC, SystemKind.DELAYED_DAMPING_STRING):
        if params.a < params.tau:
            raise AdmissibilityError(
                "need a >= tau for a dissipative energy (a=%g, tau=%g)"
                % (params.a, params.tau)
            )
        return XiInterval(2.0 * params.tau / params.a, math.inf, True, False)
    if k is SystemKind.DELAY_PARABOLIC:
        if params.a <= params.kappa:
            raise AdmissibilityError(
                "need a > kappa for a dissipative energy (a=%g, kappa=%g)"
                % (params.a, params.kappa)
            )
        half = math.sqrt(params.a**2 - params.kappa**2)
        return XiInterval(
            params.tau * (params.a - half), params.tau * (params.a + half), False, False
        )
    raise ValidationError("no admissibility rule for %s" % k)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue sequence mu_1 <= mu_2 <= ..., possibly lazily generated."""

    description: str
    rule: Callable[[int], float] = field(compare=False)
    explicit: Optional[tuple] = None

    def mu(self, n: int) -> float:
        if n < 1:
            raise ValidationError("mode index must be >= 1")
        if self.explicit is not None and n > len(self.explicit):
            raise ValidationError(
                "mode index %d beyond explicit spectrum of length %d"
                % (n, len(self.explicit))
            )
        return float(self.rule(n))

    def head(self, count: int) -> np.ndarray:
        return np.array([self.mu(n) for n in range(1, count + 1)], dtype=float)


def make_spectrum(spec, **kwargs) -> Spectrum:
    """Build a Spectrum from a descriptor.

    Accepts an explicit sequence of eigenvalues (validated positive and
    nondecreasing) or one of the named rules:

    * ``"power"``: mu_n = coefficient * n**exponent
      (keywords ``coefficient`` and ``exponent``, defaults 1.0 and 2.0)
    * ``"string"``: mu_n = n**2
    * ``"plate"``: mu_n = n**4
    * ``"beam"``: mu_n = (n*pi/length)**4 (keyword ``length``, default pi)
    """
    if isinstance(spec, str):
        if spec == "power":
            c = float(kwargs.pop("coefficient", 1.0))
            s = float(kwargs.pop("exponent", 2.0))
            _no_extra(kwargs)
            if c <= 0:
                raise ValidationError("power-law coefficient must be positive")
            if s < 0:
                raise ValidationError("power-law exponent must be nonnegative")
            return Spectrum("mu_n = %g * n**%g" % (c, s), lambda n: c * float(n) ** s)
        if spec == "string":
            _no_extra(kwargs)
            return Spectrum("mu_n = n**2", lambda n: float(n) ** 2)
        if spec == "plate":
            _no_extra(kwargs)
            return Spectrum("mu_n = n**4", lambda n: float(n) ** 4)
        if spec == "beam":
            length = float(kwargs.pop("length", math.pi))
            _no_extra(kwargs)
            if length <= 0:
                raise ValidationError("beam length must be positive")
            return Spectrum(
                "mu_n = (n*pi/%g)**4" % length,
                lambda n: (n * math.pi / length) ** 4,
            )
        raise ValidationError("unknown spectrum rule %r" % spec)
    _no_extra(kwargs)
    vals = tuple(float(v) for v in spec)
    if not vals:
        raise ValidationError("explicit spectrum must be nonempty")
    if vals[0] <= 0:
        raise ValidationError("eigenvalues must be positive")
    for prev, cur in zip(vals, vals[1:]):
        if cur < prev:
            raise ValidationError("eigenvalues must be nondecreasing")
    return Spectrum(
        "explicit (%d values)" % len(vals), lambda n: vals[n - 1], explicit=vals
    )


def _no_extra(kwargs):
    if kwargs:
        raise ValidationError("unexpected keywords: %s" % ", ".join(sorted(kwargs)))


# ---------------------------------------------------------------------------
# mode states and energy


@dataclass(frozen=True)
class ModeVector:
    """State of one mode: scalars (u, v, theta) and the history profile z.

    ``z`` is None for the baseline kind, which carries no history. For the
    delayed kinds the compatibility trace z(0) is pinned by the state itself
    (sqrt(mu)*u for the hyperbolic kind, mu^(alpha/2)*theta for the parabolic
    one, sqrt(mu)*v for the string); constructors in this package maintain it.
    """

    u: complex
    v: complex
    theta: complex
    z: object = None

    def scaled(self, s) -> "ModeVector":
        return ModeVector(
            self.u * s,
            self.v * s,
            self.theta * s,
            None if self.z is None else self.z.scaled(s),
        )


def mode_energy2(params: ModelParams, mu: float, state: ModeVector) -> float:
    """Squared energy norm mu*|u|^2 + |v|^2 + |theta|^2 + xi*int |z|^2."""
    if mu <= 0:
        raise ValidationError("mu must be positive")
    total = (
        mu * abs(state.u) ** 2 + abs(state.v) ** 2 + abs(state.theta) ** 2
    )
    if params.has_delay and state.z is not None:
        total += params.xi * profile_l2_norm2(state.z)
    return float(total)


def mode_inner(params: ModelParams, mu: float, x: ModeVector, y: ModeVector) -> complex:
    """Energy inner product of two mode states (linear in x, conjugate in y)."""
    total = (
        mu * x.u * complex(y.u).conjugate()
        + x.v * complex(y.v).conjugate()
        + x.theta * complex(y.theta).conjugate()
    )
    if params.has_delay and x.z is not None and y.z is not None:
        total += params.xi * x.z.l2_inner(y.z)
    return complex(total)


# ---------------------------------------------------------------------------
# region classification


_GEVREY_2BMA = "Gevrey class delta > 1/(2*(2*beta - alpha))"
_GEVREY_2BPA = "Gevrey class delta > 1/(2*(2*beta + alpha) - 2)"
_GEVREY_BA = "Gevrey class delta > beta/alpha"
_NOT_DIFF = "not differentiable"
_EXP = "exponentially stable"
_NOT_AS = "not asymptotically stable"
_POLY_S1 = "polynomially stable of order 1/(2*(alpha - 2*beta))"
_POLY_S2 = "polynomially stable of order 1/(2 - 2*(2*beta + alpha))"
_UNCLASSIFIED = "unclassified boundary"


@dataclass(frozen=True)
class RegionLabel:
    """Classification of an exponent pair (beta, alpha)."""

    beta: float
    alpha: float
    s_class: str  # one of S, S1, S2, S3
    r_class: str  # one of R1..R5, S_I, BoundaryOther
    in_q: bool  # 2*beta - alpha <= 1
    expected_regularity: str
    expected_stability: str


def classify_region(beta: float, alpha: float, tol: float = _TOL) -> RegionLabel:
    """Locate (beta, alpha) in the two partitions of the unit square.

    The first partition is {S, S1, S2, S3} with the closed set S winning on
    shared boundaries. The second refines the square into R1..R5 plus the
    segment S_I = {beta = 0, 1/2 < alpha <= 1}; points on seams that belong
    to none of those sets are labeled BoundaryOther and inherit the expected
    regularity and stability of the matching coarse region where one exists.
    Comparisons use the tolerance ``tol`` so that grid points generated by
    floating-point steps land on the intended side of each seam.
    """
    b, al = float(beta), float(alpha)
    if not (-tol <= b <= 1 + tol and -tol <= al <= 1 + tol):
        raise ValidationError("(beta, alpha)=(%g, %g) outside the unit square" % (b, al))

    def le(x, y):
        return x <= y + tol

    def lt(x, y):
        return x < y - tol

    # coarse partition; S is closed and takes shared boundaries
    if le(abs(2 * b - 1), al) and le(al, 2 * b):
        s_class = "S"
    elif lt(2 * b, al) and lt(0.5, al):
        s_class = "S1"
    elif lt(al, 1 - 2 * b) and le(al, 0.5):
        s_class = "S2"
    elif lt(al, 2 * b - 1):
        s_class = "S3"
    else:
        # only reachable on seams left open by the strict inequalities
        s_class = "S2" if le(al, 0.5) else "S1"

    in_q = le(2 * b - al, 1.0)

    near_half = abs(b - 0.5) <= tol and abs(al - 0.5) <= tol
    if b <= tol and lt(0.5, al) and le(al, 1.0):
        r_class = "S_I"
    elif le(b, al) and le(al, 2 * b - 0.5):
        r_class = "R1"
    elif lt(2 * b - 0.5, al) and lt(0.5, al) and lt(al, 2 * b):
        r_class = "R2"
    elif le(0.0, 1 - 2 * b) and lt(1 - 2 * b, al) and le(al, 0.5) and not near_half:
        r_class = "R3"
    elif lt(0.0, 2 * b - 1) and le(2 * b - 1, al) and lt(al, b):
        r_class = "R4"
    elif lt(0.0, al) and lt(al, 2 * b - 1):
        r_class = "R5"
    else:
        r_class = "BoundaryOther"

    regularity, stability = _expected_texts(s_class, r_class, b, al, tol)
    return RegionLabel(b, al, s_class, r_class, in_q, regularity, stability)


def _expected_texts(s_class, r_class, b, al, tol):
    table = {
        "R1": ("analytic", _EXP),
        "R2": (_GEVREY_2BMA, _EXP),
        "R3": (_GEVREY_2BPA, _EXP),
        "R4": (_GEVREY_BA, _EXP),
        "R5": (_GEVREY_BA, _NOT_AS),
        "S_I": (_NOT_DIFF, _NOT_AS),
    }
    if r_class in table:
        return table[r_class]
    if s_class == "S1":
        return _NOT_DIFF, _POLY_S1
    if s_class == "S2":
        return _NOT_DIFF, _POLY_S2
    if s_class == "S":
        # closure of S1 union S2 intersected with S
        in_cl1 = 2 * b <= al + tol and 0.5 <= al + tol
        in_cl2 = al <= 1 - 2 * b + tol and al <= 0.5 + tol
        if in_cl1 or in_cl2:
            return _NOT_DIFF, _EXP
    return _UNCLASSIFIED, _UNCLASSIFIED


def region_grid(n: int = 101) -> list:
    """Classify an n-by-n uniform grid over the unit square, row by row."""
    if n < 2:
        raise ValidationError("grid needs at least 2 points per side")
    steps = np.linspace(0.0, 1.0, n)
    out = []
    for b in steps:
        for al in steps:
            out.append(classify_region(float(b), float(al)))
    return out
