"""Exception taxonomy.

Two families matter for exit codes: ValidationError (bad input, unsupported
parameter combinations) and NumericalError (the computation itself failed or
refused to proceed). The command line maps them to exit codes 2 and 3.
"""


class ThermosemiError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ThermosemiError, ValueError):
    """Arguments outside the documented domain of a function."""


class UnsupportedCaseError(ValidationError):
    """Parameter point where no witness construction is available."""


class AdmissibilityError(ValidationError):
    """Coefficient constraints fail, so the history weight interval is undefined."""


class NumericalError(ThermosemiError, RuntimeError):
    """A numerical procedure could not produce a trustworthy result."""


class NearSingularError(NumericalError):
    """Mode system nearly singular: the probe frequency sits against the spectrum.

    Carries the determinant and the scale used for the relative test so
    callers can report how close the call was.
    """

    def __init__(self, message, det=None, scale=None):
        super().__init__(message)
        self.det = det
        self.scale = scale


class OverflowRangeError(NumericalError):
    """Requested magnitudes exceed the safe range of double-precision powers.

    Work in log space (or rescale the spectrum) if values this large are
    genuinely needed.
    """


class RootNotFoundError(NumericalError):
    """Root search exhausted its budget without an accepted root.

    ``diagnostics`` holds the scan record (window, rectangle counts) for
    post-mortem inspection.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DivergenceError(NumericalError):
    """Time integration produced a nonfinite state.

    ``first_bad_time`` is the earliest simulation time with nonfinite data.
    """

    def __init__(self, message, first_bad_time=None):
        super().__init__(message)
        self.first_bad_time = first_bad_time


class FitUndefinedError(NumericalError):
    """Decay-rate fit requested on data that cannot support it."""
