"""Profiles of the delay-transport variable on the unit interval.

A mode state carries, besides three scalar components, a function z(rho) on
[0, 1] that transports the delayed trace. Two representations are supported:

* ``GridSamples``: values on a uniform grid, integrated by the trapezoid rule
  and, where oscillatory weights appear, by a product-trapezoid (Filon) rule
  that treats the exponential factor exactly.
* ``ExponentialSum``: a finite sum of terms c * rho**m * exp(i*w*rho). This
  family is closed under differentiation and under the transport solve, so
  witness profiles and their residuals can be evaluated without quadrature
  error.

The special two-term shape c0*exp(-i*w*rho) + rho*c1*exp(i*w*(1-rho)) used by
the witness constructions is a convenience constructor on ``ExponentialSum``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


def moment_integral(m: int, phi: float) -> complex:
    """Integral of rho**m * exp(i*phi*rho) over [0, 1].

    Uses the power series when phi is small relative to m (the forward
    recurrence would amplify rounding there) and the stable forward
    recurrence otherwise.
    """
    if m < 0:
        raise ValidationError("moment order must be nonnegative")
    if abs(phi) < m + 0.5:
        return _moment_series(m, phi)
    iphi = 1j * phi
    e = cmath.exp(iphi)
    val = (e - 1.0) / iphi
    for k in range(1, m + 1):
        val = (e - k * val) / iphi
    return val


def _moment_series(m: int, phi: float) -> complex:
    iphi = 1j * phi
    term = complex(1.0)
    total = 1.0 / (m + 1)
    k = 1
    while k < 80:
        term *= iphi / k
        piece = term / (m + k + 1)
        total += piece
        if abs(piece) < 1e-20 * max(1.0, abs(total)):
            break
        k += 1
    return complex(total)


def _antiderivative_terms(c: complex, m: int, omega: float) -> tuple[list, complex]:
    """Exact antiderivative of c * s**m * exp(i*omega*s) from 0 to rho.

    Returns (pieces, constant): the integral equals
    exp(i*omega*rho) * sum(coef * rho**power for coef, power in pieces) + constant.
    Keeping every rho-dependent piece under the same exponential factor lets
    downstream term merging cancel residuals coefficient by coefficient.
    """
    if abs(omega) < m + 0.5:
        # Write the integral as e^(i*omega*rho) * B(rho) with B polynomial.
        # B' = rho^m - i*omega*B gives the stable recurrence
        # (j+1) b_{j+1} = delta_{jm} - i*omega*b_j with b_j = 0 for j <= m.
        out = []
        b = c / (m + 1)
        j = m + 1
        while j < m + 80:
            out.append((b, j))
            if abs(b) * (j + 1) < 1e-20 * max(1.0, abs(c)):
                break
            b = -1j * omega * b / (j + 1)
            j += 1
        return out, complex(0.0)
    # integration by parts: coefficient of rho^(m-j) e^(i*omega*rho) is
    # a_j = (-1)^j * m!/(m-j)! / (i*omega)^(j+1)
    iomega = 1j * omega
    coeffs = []
    fac = 1.0
    for j in range(m + 1):
        if j > 0:
            fac *= (m - j + 1)
        coeffs.append(((-1) ** j) * fac / iomega ** (j + 1))
    out = [(c * coeffs[j], m - j) for j in range(m + 1)]
    const = -c * coeffs[m]
    return out, const


@dataclass(frozen=True)
class ExponentialSum:
    """Finite sum of c * rho**m * exp(i*w*rho) terms on [0, 1]."""

    terms: tuple  # of (complex coef, int power, float freq)

    @classmethod
    def from_terms(cls, terms) -> "ExponentialSum":
        merged: dict = {}
        for c, m, w in terms:
            key = (int(m), float(w))
            merged[key] = merged.get(key, 0.0) + complex(c)
        kept = tuple(
            (c, m, w)
            for (m, w), c in sorted(merged.items())
            if c != 0.0
        )
        return cls(kept)

    @classmethod
    def constant(cls, c) -> "ExponentialSum":
        return cls.from_terms([(complex(c), 0, 0.0)])

    @classmethod
    def exponential_form(cls, c0, c1, omega: float) -> "ExponentialSum":
        """The two-term shape c0*e^(-i*omega*rho) + rho*c1*e^(i*omega*(1-rho))."""
        w = -float(omega)
        return cls.from_terms(
            [
                (complex(c0), 0, w),
                (complex(c1) * cmath.exp(1j * float(omega)), 1, w),
            ]
        )

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.zeros(rho.shape, dtype=complex)
        for c, m, w in self.terms:
            out += c * rho**m * np.exp(1j * w * rho)
        return out if out.shape else complex(out)

    def value_at_0(self) -> complex:
        return sum((c for c, m, _ in self.terms if m == 0), complex(0.0))

    def value_at_1(self) -> complex:
        return sum((c * cmath.exp(1j * w) for c, _, w in self.terms), complex(0.0))

    def scaled(self, s) -> "ExponentialSum":
        return ExponentialSum(tuple((c * s, m, w) for c, m, w in self.terms))

    def __add__(self, other: "ExponentialSum") -> "ExponentialSum":
        return ExponentialSum.from_terms(list(self.terms) + list(other.terms))

    def __sub__(self, other: "ExponentialSum") -> "ExponentialSum":
        return self + other.scaled(-1.0)

    def derivative(self) -> "ExponentialSum":
        out = []
        for c, m, w in self.terms:
            if m > 0:
                out.append((c * m, m - 1, w))
            if w != 0.0:
                out.append((c * 1j * w, m, w))
        return ExponentialSum.from_terms(out)

    def l2_inner(self, other: "ExponentialSum") -> complex:
        """Exact integral of self * conj(other) over [0, 1]."""
        total = complex(0.0)
        for c, m, w in self.terms:
            for d, n, v in other.terms:
                total += c * d.conjugate() * moment_integral(m + n, w - v)
        return total

    def l2_norm2(self) -> float:
        return max(self.l2_inner(self).real, 0.0)

    def sample(self, n: int) -> "GridSamples":
        rho = np.linspace(0.0, 1.0, n)
        return GridSamples(np.asarray(self(rho), dtype=complex))


@dataclass(frozen=True)
class GridSamples:
    """Complex samples on the uniform grid rho_k = k/(n-1), n >= 2."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size < 2:
            raise ValidationError("grid profile needs at least two samples")
        object.__setattr__(self, "values", vals)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.values.size)

    def __call__(self, rho):
        g = self.grid
        re = np.interp(rho, g, self.values.real)
        im = np.interp(rho, g, self.values.imag)
        return re + 1j * im

    def value_at_0(self) -> complex:
        return complex(self.values[0])

    def value_at_1(self) -> complex:
        return complex(self.values[-1])

    def scaled(self, s) -> "GridSamples":
        return GridSamples(self.values * s)

    def __add__(self, other):
        other = _as_grid(other, self.values.size)
        return GridSamples(self.values + other.values)

    def __sub__(self, other):
        other = _as_grid(other, self.values.size)
        return GridSamples(self.values - other.values)

    def l2_inner(self, other) -> complex:
        other = _as_grid(other, self.values.size)
        return complex(np.trapezoid(self.values * other.values.conj(), dx=1.0 / (self.values.size - 1)))

    def l2_norm2(self) -> float:
        return max(
            float(np.trapezoid(np.abs(self.values) ** 2, dx=1.0 / (self.values.size - 1))), 0.0
        )


def _as_grid(profile, n: int) -> GridSamples:
    if isinstance(profile, GridSamples):
        if profile.values.size != n:
            raise ValidationError("grid size mismatch")
        return profile
    if isinstance(profile, ExponentialSum):
        return profile.sample(n)
    raise ValidationError("not a profile: %r" % (profile,))


def profile_l2_norm2(profile) -> float:
    if profile is None:
        return 0.0
    return profile.l2_norm2()


def transport_endpoint(h, lam: float, tau: float) -> complex:
    """The forcing contribution to z(1) for the transport row.

    Solves i*lam*z + z'/tau = h with z(0) = 0 and returns z(1), which equals
    tau * e^(-i*lam*tau) * integral of e^(i*lam*tau*s) h(s) ds over [0, 1].
    """
    if h is None:
        return complex(0.0)
    lt = lam * tau
    phase = cmath.exp(-1j * lt)
    if isinstance(h, ExponentialSum):
        total = complex(0.0)
        for c, m, w in h.terms:
            total += c * moment_integral(m, w + lt)
        return tau * phase * total
    if isinstance(h, GridSamples):
        return tau * phase * _filon_cumulative(h.values, lt)[-1]
    raise ValidationError("not a profile: %r" % (h,))


def _filon_cumulative(values: np.ndarray, lt: float) -> np.ndarray:
    """Cumulative integral of e^(i*lt*s) h(s) ds with h piecewise linear."""
    n = values.size
    dx = 1.0 / (n - 1)
    s = np.linspace(0.0, 1.0, n)
    i0 = moment_integral(0, lt * dx)
    i1 = moment_integral(1, lt * dx)
    h0 = values[:-1]
    dh = values[1:] - values[:-1]
    cells = np.exp(1j * lt * s[:-1]) * dx * (h0 * i0 + dh * i1)
    out = np.zeros(n, dtype=complex)
    out[1:] = np.cumsum(cells)
    return out


def transport_solve(z0: complex, lam: float, tau: float, h):
    """Solve the transport row i*lam*z + z'/tau = h with z(0) = z0.

    Exact (closed-form or convergent series) for ``ExponentialSum`` h; for
    ``GridSamples`` h the variation-of-constants integral is evaluated with
    the product-trapezoid rule on the sample grid. ``h=None`` means zero
    forcing.
    """
    lt = lam * tau
    if h is None or isinstance(h, ExponentialSum):
        out = [(complex(z0), 0, -lt)]
        if h is not None:
            for c, m, w in h.terms:
                omega = w + lt
                pieces, const = _antiderivative_terms(c, m, omega)
                for coef, power in pieces:
                    # e^(i*omega*rho) * e^(-i*lt*rho) = e^(i*w*rho)
                    out.append((tau * coef, power, w))
                out.append((tau * const, 0, -lt))
        return ExponentialSum.from_terms(out)
    if isinstance(h, GridSamples):
        lt_rho = lt * np.linspace(0.0, 1.0, h.values.size)
        cum = _filon_cumulative(h.values, lt)
        vals = np.exp(-1j * lt_rho) * (z0 + tau * cum)
        return GridSamples(vals)
    raise ValidationError("not a profile: %r" % (h,))
