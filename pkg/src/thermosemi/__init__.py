"""Mode-by-mode spectral toolkit for delayed thermoelastic coupled systems.

The package studies abstract two-field models (an elastic displacement
coupled to a thermal field through fractional operator powers) in which one
term acts with a fixed delay. Per eigenvalue mu of the spatial operator the
evolution reduces to a small delay ODE plus a transport equation for the
history trace; everything here works mode by mode on that reduction:

* ``core``: parameter records, eigenvalue sequences, energy inner products,
  classification of the (beta, alpha) square into regularity and stability
  regions, admissible history weights;
* ``profiles``: closed-form exponential-sum history profiles with exact
  transport solves and L2 inner products, plus a sampled-grid fallback;
* ``resolvent``: per-mode resolvent solves at i*lambda, residuals, Rayleigh
  lower bounds for the resolvent norm, imaginary-axis scans, characteristic
  functions and rightmost-root estimates;
* ``witness``: explicit forcing families certifying that the resolvent norm
  stays bounded below along the imaginary axis (so the solution semigroup is
  not immediately norm-continuous, hence not differentiable);
* ``dynamics``: RK4 method-of-steps integration of mode truncations with
  energy bookkeeping and decay-rate fits;
* ``models``: named presets binding PDE realizations to parameters and
  spectra;
* ``cli``: the ``thermosemi`` command-line frontend.
"""

from .core import (
    ModelParams,
    ModeVector,
    RegionLabel,
    Spectrum,
    SystemKind,
    XiInterval,
    classify_region,
    make_spectrum,
    mode_energy2,
    mode_inner,
    region_grid,
    xi_admissible,
)
from .dynamics import (
    DecayFit,
    InitialData,
    Trajectory,
    characteristic_initial,
    fit_decay,
    mode_ode_coefficients,
    simulate,
)
from .errors import (
    AdmissibilityError,
    DivergenceError,
    FitUndefinedError,
    NearSingularError,
    NumericalError,
    OverflowRangeError,
    RootNotFoundError,
    ThermosemiError,
    UnsupportedCaseError,
    ValidationError,
)
from .models import PRESET_NAMES, Preset, preset
from .profiles import (
    ExponentialSum,
    GridSamples,
    transport_endpoint,
    transport_solve,
)
from .resolvent import (
    CharacteristicQuery,
    ModeForcing,
    ScanRow,
    characteristic_value,
    forcing_norm2,
    mode_residual,
    mode_resolvent_norm_lb,
    resolvent_scan,
    solve_mode_resolvent,
    spectral_abscissa_estimate,
)
from .witness import (
    CERTIFICATE,
    ExponentChoice,
    StringWitness,
    SweepResult,
    WitnessMode,
    WitnessRow,
    build_witness_mode,
    richardson_extrapolate,
    select_exponents,
    string_witness,
    witness_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core
    "ModelParams",
    "ModeVector",
    "RegionLabel",
    "Spectrum",
    "SystemKind",
    "XiInterval",
    "classify_region",
    "make_spectrum",
    "mode_energy2",
    "mode_inner",
    "region_grid",
    "xi_admissible",
    # profiles
    "ExponentialSum",
    "GridSamples",
    "transport_endpoint",
    "transport_solve",
    # resolvent
    "CharacteristicQuery",
    "ModeForcing",
    "ScanRow",
    "characteristic_value",
    "forcing_norm2",
    "mode_residual",
    "mode_resolvent_norm_lb",
    "resolvent_scan",
    "solve_mode_resolvent",
    "spectral_abscissa_estimate",
    # witness
    "CERTIFICATE",
    "ExponentChoice",
    "StringWitness",
    "SweepResult",
    "WitnessMode",
    "WitnessRow",
    "build_witness_mode",
    "richardson_extrapolate",
    "select_exponents",
    "string_witness",
    "witness_sweep",
    # dynamics
    "DecayFit",
    "InitialData",
    "Trajectory",
    "characteristic_initial",
    "fit_decay",
    "mode_ode_coefficients",
    "simulate",
    # models
    "PRESET_NAMES",
    "Preset",
    "preset",
    # errors
    "ThermosemiError",
    "ValidationError",
    "UnsupportedCaseError",
    "AdmissibilityError",
    "NumericalError",
    "NearSingularError",
    "OverflowRangeError",
    "RootNotFoundError",
    "DivergenceError",
    "FitUndefinedError",
]
