"""
A witness family certifying failure of norm continuity
=======================================================

The delayed systems here are exponentially stable, yet their semigroups
never become continuous in operator norm for t > 0. The certificate is a
sequence of unit forcings F_n at frequencies lambda_n growing with the mode
ladder whose resolvent solutions keep a norm bounded away from zero: the
ratio |U_n| / |F_n| tends to tau/sqrt(3) instead of vanishing.
"""

import math

from thermosemi.core import ModelParams, SystemKind, make_spectrum
from thermosemi.witness import witness_sweep

spectrum = make_spectrum("power", coefficient=1.0, exponent=2.0)  # mu_n = n^2
target = 1.0 / math.sqrt(3.0)

# Delay acting on the elastic stiffness, Kelvin-Voigt damping keeping the
# problem well posed. The residual column is the exact equation defect of
# each constructed pair, so small values mean the certificate is genuine.
hyp = ModelParams(
    kind=SystemKind.DELAY_HYPERBOLIC, beta=0.5, alpha=0.5, a=1.0, tau=1.0, xi=2.0
)
sweep = witness_sweep(hyp, spectrum, [2**k for k in range(4, 11)])
print("delayed stiffness, beta = alpha = 1/2:")
for row in sweep.rows:
    print(
        "  n=%5d lambda=%10.1f ratio=%.6f residual=%.1e"
        % (row.n, row.lam, row.ratio, row.residual)
    )
print("  extrapolated limit %.6f, target tau/sqrt(3) = %.6f" % (sweep.limit_estimate, target))
print("  certified:", sweep.certified)
print("  " + sweep.conclusion)
print()

# Delay acting on the thermal damping instead. The forcing coefficient now
# oscillates with the delay phase, so single ratios wobble while the
# extrapolated limit still lands on the same constant.
par = ModelParams(
    kind=SystemKind.DELAY_PARABOLIC, beta=0.5, alpha=0.5, a=2.0, kappa=1.0, tau=1.0, xi=3.0
)
sweep = witness_sweep(par, spectrum, [2**k for k in range(4, 11)])
print("delayed thermal damping, beta = alpha = 1/2:")
for row in sweep.rows:
    print("  n=%5d ratio=%.6f |phi|=%.3f" % (row.n, row.ratio, abs(row.phi)))
print("  extrapolated limit %.6f (same constant)" % sweep.limit_estimate)
