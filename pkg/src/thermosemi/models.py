"""Ready-made model presets.

Each preset binds a concrete PDE realization to a parameter template and an
explicit eigenvalue sequence, so the other modules can be driven without
hand-assembling ModelParams and Spectrum objects. All presets sit inside the
well-posedness set 2*beta - alpha <= 1.
"""

import math
from dataclasses import dataclass

from .core import (
    ModelParams,
    Spectrum,
    SystemKind,
    classify_region,
    make_spectrum,
    xi_admissible,
)
from .errors import ValidationError

__all__ = ["Preset", "preset", "PRESET_NAMES"]

PRESET_NAMES = ("plate-1d", "string", "beam", "abstract-power")

_PLATE_NOTES = (
    "Hinged plate segment on (0, pi): fourth-order elastic operator with "
    "delayed stiffness and instantaneous strong damping, coupled to heat "
    "flux through the Laplacian (beta = alpha = 1/2). Mode basis sin(n x), "
    "mu_n = n**4."
)

_STRING_NOTES = (
    "Fixed-end string on (0, pi) with the viscous damping term delayed: "
    "u_tt - u_xx - a*u_xxt(t - tau) = theta_x, theta_t - theta_xx = u_tx. "
    "Displacement modes sin(n x), temperature modes cos(n x) for n >= 1; "
    "the constant temperature mode is excluded by the zero-mean condition. "
    "mu_n = n**2. The bounded-ratio witness construction applies to odd n "
    "only; even modes leave a constant term that the closed-form "
    "antiderivative cannot absorb."
)

_BEAM_NOTES = (
    "Simply supported beam of length L with the thermal flux delayed: "
    "fourth-order elastic operator, heat conduction of half order, "
    "beta = alpha = 1/2. Mode basis sin(n pi x / L), mu_n = (n pi / L)**4."
)

_ABSTRACT_NOTES = (
    "Abstract power-law spectrum mu_n = coefficient * n**exponent for a "
    "caller-chosen system kind; stands in for general domains where only "
    "the eigenvalue growth rate matters."
)


@dataclass(frozen=True)
class Preset:
    """Named parameter template plus spectrum plus realization notes."""

    name: str
    params: ModelParams
    spectrum: Spectrum
    notes: str


def _default_xi(params: ModelParams) -> float:
    """Center (or left end) of the admissible history-weight interval."""
    interval = xi_admissible(params)
    if interval.upper is None or math.isinf(interval.upper):
        return interval.lower
    return 0.5 * (interval.lower + interval.upper)


def preset(
    name: str,
    L: float = math.pi,
    kind=None,
    coefficient: float = 1.0,
    exponent: float = 2.0,
    **param_overrides,
) -> Preset:
    """Build one of the named presets.

    ``L`` applies to the beam; ``kind``, ``coefficient`` and ``exponent``
    apply to "abstract-power". Remaining keywords override ModelParams
    fields (beta, alpha, a, kappa, tau, xi). When xi is not given it
    defaults to an admissible value for the final coefficients.
    """
    if name == "plate-1d":
        base = ModelParams(
            kind=SystemKind.DELAY_HYPERBOLIC, beta=0.5, alpha=0.5, a=1.0, tau=1.0
        )
        spectrum = make_spectrum("plate")
        notes = _PLATE_NOTES
    elif name == "string":
        base = ModelParams(kind=SystemKind.DELAYED_DAMPING_STRING, a=1.0, tau=1.0)
        spectrum = make_spectrum("string")
        notes = _STRING_NOTES
    elif name == "beam":
        base = ModelParams(
            kind=SystemKind.DELAY_PARABOLIC,
            beta=0.5,
            alpha=0.5,
            a=2.0,
            kappa=1.0,
            tau=1.0,
        )
        spectrum = make_spectrum("beam", length=L)
        notes = _BEAM_NOTES
    elif name == "abstract-power":
        if kind is None:
            raise ValidationError("abstract-power preset requires kind=...")
        k = SystemKind.parse(kind) if not isinstance(kind, SystemKind) else kind
        base = ModelParams(kind=k, beta=0.5, alpha=0.5, a=1.0, tau=1.0)
        if k is SystemKind.DELAY_PARABOLIC:
            base = base.with_(a=2.0, kappa=1.0)
        spectrum = make_spectrum("power", coefficient=coefficient, exponent=exponent)
        notes = _ABSTRACT_NOTES
    else:
        raise ValidationError(
            "unknown preset %r; valid names: %s" % (name, ", ".join(PRESET_NAMES))
        )

    fields = {k_: v for k_, v in param_overrides.items()}
    unknown = set(fields) - {"beta", "alpha", "a", "kappa", "tau", "xi"}
    if unknown:
        raise ValidationError("unknown preset overrides: %s" % ", ".join(sorted(unknown)))
    xi_given = "xi" in fields
    params = base.with_(**fields) if fields else base
    if not xi_given and params.kind is not SystemKind.NO_DELAY_BASELINE:
        try:
            params = params.with_(xi=_default_xi(params))
        except ValidationError:
            pass  # hypothesis violated (for example a < tau); keep xi as given
    label = classify_region(params.beta, params.alpha)
    if not label.in_q:
        raise ValidationError(
            "preset (beta, alpha)=(%g, %g) is outside 2*beta - alpha <= 1"
            % (params.beta, params.alpha)
        )
    return Preset(name, params, spectrum, notes)
